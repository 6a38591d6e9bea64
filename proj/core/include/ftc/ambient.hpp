#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ftc/perm.hpp"
#include "ftc/tree.hpp"

namespace ftc {

// Canonical subgroup key: order plus a 128-bit hash of the sorted element
// image tables. Representation independent, so keys survive checkpoints and
// database round trips.
struct SubKey {
  uint64_t order = 0, h1 = 0, h2 = 0;
  bool operator==(const SubKey& o) const {
    return order == o.order && h1 == o.h1 && h2 == o.h2;
  }
  bool operator<(const SubKey& o) const {
    if (order != o.order) return order < o.order;
    if (h1 != o.h1) return h1 < o.h1;
    return h2 < o.h2;
  }
  std::string hex() const;
};

struct SubKeyHash {
  size_t operator()(const SubKey& k) const {
    return static_cast<size_t>(k.h1 ^ (k.h2 * 0x9e3779b97f4a7c15ull) ^ k.order);
  }
};

// Dense table of a full or cyclic-label ambient group at one depth. Elements
// are leaf permutations sorted by image table, so index order is canonical.
class Ambient {
public:
  static constexpr size_t kMaxElements = 1u << 25;

  Ambient(int d, int depth, bool cyclic);

  const TreeGeometry& geometry() const { return geo_; }
  bool cyclic() const { return cyclic_; }
  int d() const { return geo_.d; }
  int depth() const { return geo_.depth; }
  uint32_t size() const { return static_cast<uint32_t>(elems_.size()); }
  const Perm& elem(uint32_t i) const { return elems_[i]; }
  std::optional<uint32_t> try_index(const Perm& p) const;
  uint32_t index_of(const Perm& p) const;

  uint32_t id() const { return id_; }
  uint32_t mul(uint32_t a, uint32_t b) const { return index_of(elems_[a] * elems_[b]); }
  uint32_t inv(uint32_t a) const { return inv_[a]; }
  // depth-(D-1) data, indices into lower().  For depth 1 the lower table is
  // the one-element depth-0 group.
  uint32_t proj(uint32_t a) const { return proj_[a]; }
  uint32_t sec(uint32_t a, int x) const { return sec_[static_cast<size_t>(a) * geo_.d + x]; }
  bool in_st1(uint32_t a) const { return st1_[a] != 0; }
  const Ambient* lower() const { return lower_.get(); }
  uint32_t lower_size() const { return lower_ ? lower_->size() : 1; }

  const std::vector<uint32_t>& generator_indices() const { return gen_idx_; }

  // closure of the given elements, ascending (= canonical) index order
  std::vector<uint32_t> close(const std::vector<uint32_t>& gens) const;
  std::vector<uint32_t> all_indices() const;
  // greedy generating set from a sorted element list
  std::vector<uint32_t> reduce_gens(const std::vector<uint32_t>& sorted_elems) const;
  SubKey key_of(const std::vector<uint32_t>& sorted_elems) const;

  // true iff the permutation is an automorphism of T^depth with every label
  // inside the ambient label group
  bool admits(const Perm& leaf) const;

private:
  TreeGeometry geo_;
  bool cyclic_;
  std::vector<Perm> elems_;
  std::unordered_map<Perm, uint32_t, PermHash> idx_;
  std::vector<uint32_t> inv_, proj_, sec_;
  std::vector<uint8_t> st1_;
  std::vector<uint32_t> gen_idx_;
  uint32_t id_ = 0;
  std::unique_ptr<Ambient> lower_;
};

// Subgroup of an ambient: sorted element indices, a reduced generating set,
// and the canonical key.
struct Subgroup {
  std::vector<uint32_t> elems;
  std::vector<uint32_t> gens;
  uint64_t order = 1;
  SubKey key;
};

Subgroup make_subgroup(const Ambient& amb, const std::vector<uint32_t>& gen_idx);
Subgroup subgroup_from_elems(const Ambient& amb, std::vector<uint32_t> elems);

}  // namespace ftc
