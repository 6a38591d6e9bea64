#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ftc/ambient.hpp"
#include "ftc/finite_type.hpp"

namespace ftc {

// Conjugation engine for pattern subgroups of the full Aut(T^D). Small
// ambients are enumerated directly; the depth-3 ternary group (order 6^13)
// is handled through its normal cyclic-label subgroup and the 2^13
// transposition-label lifts.
class GammaAmbient {
public:
  GammaAmbient(int d, int depth);

  int d() const { return d_; }
  int depth() const { return depth_; }

  // some r with r P r^-1 = Q, or nullopt
  std::optional<Perm> find_conjugator(const std::vector<Perm>& p_elems,
                                      const std::vector<Perm>& q_elems);
  // all elements of N_{Aut(T^D)}(Q); throws when the result exceeds bound
  std::vector<Perm> normalizer_elements(const std::vector<Perm>& q_elems,
                                        uint64_t bound = 2000000);

private:
  struct Orbit {
    std::vector<SubKey> keys;
    std::vector<uint32_t> transversal;   // base-table element indices
    std::vector<uint32_t> schreier;      // base-part normalizer generators
    int find(const SubKey& k) const;
  };
  Orbit conj_orbit(const std::vector<uint32_t>& elems, bool want_schreier) const;
  void build_conj_tables() const;
  std::vector<uint32_t> to_base(const std::vector<Perm>& elems) const;
  // transposition-sign portraits constant on the subgroup's vertex orbits
  std::vector<Perm> orbit_lifts(const std::vector<Perm>& elems) const;

  int d_, depth_;
  std::unique_ptr<Ambient> base_;  // full when small, else cyclic part
  bool decomposed_ = false;        // base_ holds only the cyclic-label part
  // per-generator conjugation tables over the base part, built on demand
  mutable std::vector<std::vector<uint32_t>> conj_tables_;
};

struct GammaGraph {
  bool empty = true;                    // S_PQ was empty
  std::optional<Perm> r0;
  std::vector<Perm> vertex_reps;        // one representative per class of S_PQ/~
  std::vector<std::vector<int>> edges;  // adjacency, C_i -> C_j
  bool has_cycle = false;               // self-loops count
  std::vector<int> cycle;               // vertex sequence v0 .. vk with vk->v0
  size_t vertex_count() const { return vertex_reps.size(); }
  size_t edge_count() const;
  std::string dot() const;
};

// directed graph on S_PQ / ~ with the one-representative edge test
GammaGraph gamma_graph(GammaAmbient& amb, const std::vector<Perm>& p_elems,
                       const std::vector<Perm>& q_elems);

enum class ConjugacyVerdict { Conjugate, NotConjugate, Unknown };

struct ConjugacyResult {
  ConjugacyVerdict verdict = ConjugacyVerdict::Unknown;
  GammaGraph graph;
  // windows of the conjugator recipe along the cycle, one class per level
  std::vector<Perm> witness_cycle;
};

// p_fractal: fractality of G_P makes the absence of a cycle decisive
ConjugacyResult are_conjugate(GammaAmbient& amb, const std::vector<Perm>& p_elems,
                              const std::vector<Perm>& q_elems, bool p_fractal);

// portrait of the conjugator to depth n built from the witness cycle;
// validates conditions (a) and (b) at every window
TreeAut build_conjugator(const GammaGraph& graph, const std::vector<Perm>& p_elems,
                         const std::vector<Perm>& q_elems, int n);

enum class RigidityKind { Rigid, NotRigid, Unknown };
struct RigidityStatus {
  RigidityKind kind = RigidityKind::Unknown;
  std::string criterion;  // "wp-fractal", "branching-transitive", "wp-gamma"
  std::string str() const;
};

// criteria in order: (a) fractal subgroup of the prime iterated wreath
// product: rigid iff pi_2 is not C_p x C_p; (b) branching pattern transitive
// on level 1; (c) cycle-with-deep-action in the leaf-stabilizer graph
RigidityStatus rigidity_status(PatternAnalysis& pa);

// leaf-stabilizer graph of criterion (c), exposed for tests
struct RigidityGraph {
  std::vector<Perm> vertices;  // elements fixing the rightmost leaf
  std::vector<std::vector<int>> edges;
  bool criterion_met = false;
};
RigidityGraph rigidity_graph(PatternAnalysis& pa);

enum class CharacteristicFunctor { Derived, DerivedK, LowerCentralK };

struct StableQuotient {
  bool available = false;  // stabilized within the cap
  int n0 = 0;
  uint64_t order = 0;
  std::vector<Perm> quotient;  // coset action, abstract fingerprint
  std::string name;
};

// isomorphism-invariant finite quotient pi_n0(G_P)/F(pi_n0(G_P)) once the
// indices over the maximal branching subgroup stabilize; requires Ktilde
// normal in P
StableQuotient stable_characteristic_quotient(PatternAnalysis& pa,
                                              CharacteristicFunctor functor, int k = 1,
                                              int n_max = 0);

}  // namespace ftc
