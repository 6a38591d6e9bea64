#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ftc/bigint.hpp"
#include "ftc/perm_group.hpp"
#include "ftc/tree.hpp"

namespace ftc {

enum class Fractality { NotFractal, Fractal, StronglyFractal, SuperStronglyFractal };
const char* fractality_name(Fractality f);

struct TfgStatus {
  enum Kind { TFG, NotTFG, Undecided } kind = Undecided;
  int n = 0;
  std::string str() const;
};

struct JiStatus {
  enum Kind { JI, Undecided, NotLevelTransitive } kind = Undecided;
  int n = 0;
  std::vector<std::string> indices;  // a_D, a_{D+1}, ... as computed
  std::string str() const;
};

struct LevelTransitivity {
  enum Kind { YesWpInfinite, YesFractal, VerifiedUpTo, No } kind = VerifiedUpTo;
  int n = 0;
  std::string str() const;
};

struct HausdorffDim {
  uint64_t st_order = 1;
  int d = 2, depth = 1;
  double value = 0;
  bool exact = false;     // num/den below is an exact dimension
  bool relative = false;  // rational is relative to the cyclic ambient closure
  uint64_t num = 0, den = 1;
  std::string str() const;
};

struct BranchingInfo {
  uint64_t ktilde_order = 1;
  uint64_t index = 1;
  bool normal = true;
  std::vector<Perm> ktilde_gens;
};

// Analysis battery for one pattern subgroup P <= Aut(T^D) (or the cyclic
// ambient). Truncation groups, stabilizers and derived subgroups are cached
// per level; every constructed level is checked against the closed order
// formula |P| |St_P(D-1)|^{d+...+d^{n-D}}.
class PatternAnalysis {
public:
  PatternAnalysis(int d, int depth, bool cyclic_ambient, std::vector<Perm> gens,
                  int level_cap = 0, uint64_t element_bound = 10000000);

  int d() const { return geo_.d; }
  int depth() const { return geo_.depth; }
  int level_cap() const { return cap_; }
  const TreeGeometry& geometry() const { return geo_; }
  const std::vector<Perm>& generators() const { return gens_; }
  const std::vector<Perm>& elements();  // sorted leaf permutations
  uint64_t order();
  bool contains(const Perm& leaf);
  bool is_p_group(uint64_t* p = nullptr);
  bool is_wp_contained();  // all labels powers of the d-cycle, d prime
  bool is_minimal();       // closed under its own patterns

  uint64_t st_order();
  const std::vector<Perm>& st_elements();
  bool finite();
  HausdorffDim hausdorff();
  TfgStatus tfg_status(int n_max = 0);
  JiStatus just_infinite_status(int n_max = 0);
  Fractality fractality();
  LevelTransitivity level_transitivity(int n_cap = 0);
  BranchingInfo maximal_branching();

  const PermGroup& truncation(int n);
  const PermGroup& trunc_level_stab(int n, int k);
  const PermGroup& trunc_derived(int n);
  const PermGroup& trunc_stab_depth_derived(int n);  // (level stab at D-1)'
  // generators of pi_n(G_P) as portraits
  const std::vector<TreeAut>& truncation_gen_auts(int n);
  // greedy canonical extension of a pattern element to a deeper truncation
  TreeAut extend_element(const TreeAut& a, int to_depth);

private:
  struct Trunc {
    PermGroup group;
    std::vector<TreeAut> gen_auts;
    std::map<int, PermGroup> level_stab;
    std::optional<PermGroup> derived;
    std::optional<PermGroup> stabD_derived;
  };
  Trunc& trunc(int n);
  const Perm& complete_section(const Perm& window);  // min pattern over a window
  int clamp_cap(int n) const;

  TreeGeometry geo_;
  bool cyclic_;
  std::vector<Perm> gens_;
  int cap_;
  uint64_t element_bound_;
  std::vector<Perm> elements_, st_elements_;
  std::unordered_map<Perm, uint32_t, PermHash> elem_index_;
  std::map<int, Trunc> truncs_;
  std::unordered_map<Perm, Perm, PermHash> completion_;  // pi_{D-1} image -> min pattern
  std::optional<Fractality> fractality_;
  std::optional<LevelTransitivity> lt_;
  std::optional<BranchingInfo> branching_;
};

struct WreathPerfectReport {
  bool transitive = false;
  bool perfect = false;  // perfect label group: W_L just-infinite, tfg, strongly complete
};
WreathPerfectReport wreath_perfect_check(int d, const std::vector<Perm>& label_gens);

// full preimage of a depth-D pattern at depth E >= D (same ambient); the
// associated group of finite type is unchanged
std::vector<Perm> preimage_at_depth(int d, bool cyclic, const std::vector<Perm>& gens,
                                    int from_depth, int to_depth);

// portrait of a vertex-domain permutation
TreeAut vertex_perm_to_aut(const TreeGeometry& geo, const Perm& vp);

}  // namespace ftc
