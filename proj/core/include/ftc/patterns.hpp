#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ftc/ambient.hpp"
#include "ftc/subgroups.hpp"

namespace ftc {

// membership mask of pi_{D-1}(H) over the lower table
std::vector<uint8_t> lower_image_mask(const Ambient& amb, const std::vector<uint32_t>& elems);

// true iff every generator section s|_x lies in pi_{D-1}(H); by the
// this extends multiplicatively to every element of <k_gens>
bool is_closed_under_patterns(const Ambient& amb, const std::vector<uint32_t>& k_gens,
                              const std::vector<uint32_t>& h_elems);

// largest subgroup of H closed under patterns of H.  The section condition
// is closed under products and inverses, so the qualifying elements of H
// already form the subgroup the generating-set/coset algorithm converges to.
std::vector<uint32_t> maximal_pattern_closed(const Ambient& amb,
                                             const std::vector<uint32_t>& h_elems);

// iterate H <- P(H) until closed under its own patterns
std::vector<uint32_t> minimal_pattern_of(const Ambient& amb, std::vector<uint32_t> h_elems);

struct PatternRecord {
  std::vector<Perm> gens;  // leaf permutations on d^depth points
  uint64_t order = 1;
  SubKey key;  // order 0 marks "not yet computed"
};

struct PatternDatabase {
  int d = 2;
  int depth = 1;
  bool cyclic = false;
  std::vector<PatternRecord> patterns;  // ascending canonical key
};

bool leaf_in_ambient(int d, int depth, bool cyclic, const Perm& leaf);
void save_database(const PatternDatabase& db, const std::string& path);
PatternDatabase load_database(const std::string& path);
// element closure and canonical key of one record
std::vector<Perm> record_elements(const PatternRecord& rec, int degree,
                                  uint64_t bound = 10000000);
SubKey record_key(const PatternRecord& rec, int degree);

struct EnumerateOptions {
  double time_budget_seconds = 0;  // 0 = unlimited
  std::string checkpoint_path;     // written when the budget aborts the run
  uint64_t progress_every = 0;     // pops between progress callbacks
  std::function<void(uint64_t pops, size_t found, size_t pending)> progress;
  SubgroupOptions subgroup_opts;
};

struct EnumerateOutcome {
  PatternDatabase db;
  bool finished = true;
  uint64_t pops = 0;
};

EnumerateOutcome enumerate_minimal_patterns(const Ambient& amb,
                                            const EnumerateOptions& opts = {});
EnumerateOutcome resume_enumeration(const Ambient& amb, const std::string& checkpoint_path,
                                    const EnumerateOptions& opts = {});

}  // namespace ftc
