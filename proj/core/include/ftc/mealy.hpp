#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ftc/finite_type.hpp"
#include "ftc/perm.hpp"
#include "ftc/tree.hpp"

namespace ftc {

struct MealyState {
  std::string name;
  Perm out;             // output permutation of the alphabet
  std::vector<int> to;  // transition target per input letter
};

// Finite invertible Mealy automaton over {1..d}.
class MealyAutomaton {
public:
  MealyAutomaton(int d, std::vector<MealyState> states);

  int d() const { return d_; }
  size_t state_count() const { return states_.size(); }
  const MealyState& state(size_t i) const { return states_[i]; }
  int state_index(const std::string& name) const;

  // state reached from q along the input word of the level-`level` vertex v
  int walk(int q, int level, uint32_t v) const;
  // depth-n portrait of the state q: the label at v is the output
  // permutation of the state reached along v
  TreeAut expand(int q, int n) const;
  std::vector<Perm> truncated_gens(int n) const;

private:
  int d_;
  std::vector<MealyState> states_;
};

MealyAutomaton parse_mealy(const std::string& text);
MealyAutomaton load_mealy(const std::string& path);
std::string format_mealy(const MealyAutomaton& a);

struct GroupWord {
  std::vector<std::pair<std::string, int>> factors;  // state name, exponent
};
GroupWord parse_word(const std::string& text);  // e.g. "b c^-2 b^-1 d^2 b^-1 c d a^-1"
TreeAut evaluate_word(const MealyAutomaton& a, const GroupWord& w, int n);

struct ProbeWitness {
  uint64_t power = 0;
  int level = 0;
  uint32_t vertex = 0;
};

struct ProbeReport {
  int n_max = 0;
  uint64_t k_max = 0;
  uint64_t truncation_order = 0;           // order of pi_{n_max}(g)
  bool order_within_k = false;             // truncation_order <= k_max
  std::optional<ProbeWitness> infinite;    // g^m fixes the level and sections to g
  bool inconclusive = true;
};

// Finite-order evidence is tagged with the probed depth; the infinite-order
// witness additionally demands gcd(m, |pi_{n_max}(g)|) > 1, which makes the
// self-section argument sound.
ProbeReport word_section_probe(const MealyAutomaton& a, const GroupWord& w,
                               uint64_t k_max = 64, int n_max = 0);

std::vector<std::string> catalog_names();
MealyAutomaton catalog_automaton(const std::string& name);

struct ClosureVerdict {
  bool truncation_matches = false;
  bool p_group = false;
  bool tfg = false;
  std::string detail;
  bool closure_equals() const { return truncation_matches && p_group && tfg; }
};

// hypotheses of the closure identification: pi_D(G(A)) equals the pattern,
// the pattern is a p-group, and its group of finite type is tfg
ClosureVerdict closure_check(const MealyAutomaton& a, PatternAnalysis& pa);

}  // namespace ftc
