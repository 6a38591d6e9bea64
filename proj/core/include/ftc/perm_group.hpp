#pragma once

#include <cstdint>
#include <vector>

#include "ftc/bigint.hpp"
#include "ftc/perm.hpp"

namespace ftc {

// Finite permutation group with a base and strong generating set. The base
// is conceptually every point 0..degree-1 in order, so the pointwise
// stabilizer of {0..t-1} is a chain suffix and comes out for free; only
// levels with a non-trivial orbit are materialized.
class PermGroup {
public:
  PermGroup() : degree_(0), order_(1) {}
  PermGroup(unsigned degree, const std::vector<Perm>& gens);
  // When the order of <gens> is known, verification stops as soon as the
  // fundamental orbit product reaches it (the transversal product argument
  // makes the chain a complete BSGS at that point).
  PermGroup(unsigned degree, const std::vector<Perm>& gens, const BigUint& known_order);

  unsigned degree() const { return degree_; }
  const BigUint& order() const { return order_; }
  const std::vector<Perm>& generators() const { return gens_; }
  const std::vector<Perm>& strong_generators() const { return pool_; }
  bool is_trivial() const { return order_ == BigUint(1); }

  bool contains(const Perm& g) const;
  bool contains_group(const PermGroup& h) const;
  bool same_group(const PermGroup& h) const {
    return order_ == h.order() && contains_group(h);
  }

  // subgroup fixing points 0..t-1 pointwise
  PermGroup prefix_stabilizer(unsigned t) const;
  std::vector<Perm> prefix_stabilizer_gens(unsigned t) const;

  // all elements; throws std::length_error if order exceeds bound
  std::vector<Perm> elements(uint64_t bound = 10000000) const;

  bool is_transitive_on(unsigned lo, unsigned hi) const;
  bool is_abelian() const;

  BigUint index_in(const PermGroup& big) const {
    return big.order() / order_;
  }

  // drop generators already generated by the preceding ones
  static std::vector<Perm> reduce_generators(unsigned degree, const std::vector<Perm>& gens);

private:
  struct Level {
    unsigned beta = 0;
    bool dirty = true;
    std::vector<unsigned> orbit;    // discovery order, orbit[0] == beta
    std::vector<int32_t> pos;       // point -> orbit position or -1 (size degree)
    std::vector<int32_t> via;       // orbit position -> pool index of edge generator
    std::vector<unsigned> prev;     // orbit position -> previous point
  };

  explicit PermGroup(unsigned degree) : degree_(degree), order_(1) {}
  void add_pool(const Perm& g);
  void rebuild_level(size_t li);
  void complete(const BigUint* known_order);
  BigUint chain_product() const;
  // divide h by the level-li transversal element for point p (in place)
  void divide(Perm& h, size_t li, unsigned p) const;
  Perm transversal(size_t li, unsigned p) const;
  // sift through levels with beta >= from_point; returns first moved point of
  // the residue (== degree when the residue is the identity)
  unsigned sift(Perm& h, unsigned from_point) const;
  size_t level_index_for(unsigned beta) const;  // existing or insertion point
  void recompute_order();

  unsigned degree_;
  std::vector<Perm> gens_;   // generators as given (reduced on request only)
  std::vector<Perm> pool_;   // strong generators
  std::vector<Perm> pool_inv_;
  std::vector<unsigned> pool_home_;  // min moved point per pool entry
  std::vector<Level> levels_;        // ascending beta
  BigUint order_;

  friend PermGroup derived_subgroup(const PermGroup& g);
  friend PermGroup normal_closure(const PermGroup& g, std::vector<Perm> seed);
  friend class GroupBuilder;
};

// Incremental stabilizer chain without the verification sweep. A successful
// sift is always a sound membership certificate; a failed one may be a false
// negative, so only positive answers are trusted.
class GroupBuilder {
public:
  explicit GroupBuilder(unsigned degree);
  // true if g was new to the chain
  bool add(const Perm& g);
  bool sift_member(const Perm& g) const;
  const std::vector<Perm>& pool() const;
  PermGroup verify() const;  // full Schreier-Sims over the pool

private:
  PermGroup pg_;
};

PermGroup derived_subgroup(const PermGroup& g);
// smallest subgroup of g containing seed and normal in g
PermGroup normal_closure(const PermGroup& g, std::vector<Perm> seed);
GroupBuilder normal_closure_builder(const PermGroup& g, const std::vector<Perm>& seed);
GroupBuilder derived_builder(const PermGroup& g);

unsigned min_moved_point(const Perm& p);

}  // namespace ftc
