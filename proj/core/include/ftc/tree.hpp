#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftc/perm.hpp"

namespace ftc {

// Rooted d-regular tree truncated at `depth` levels. Level-k vertices are
// words of length k over {1..d}; internally a level-k vertex is its radix-d
// value in 0..d^k-1, so lexicographic word order equals numeric order and
// leaf i (classical numbering 1..d^D, left to right) is value i-1.
struct TreeGeometry {
  int d = 2;
  int depth = 1;
  std::vector<uint32_t> level_size;  // level_size[k] = d^k, k = 0..depth
  std::vector<uint32_t> ioff;        // internal-vertex offsets, levels 0..depth-1
  std::vector<uint32_t> voff;        // vertex-domain offsets, levels 1..depth

  TreeGeometry() { init(); }
  TreeGeometry(int d_, int depth_) : d(d_), depth(depth_) { init(); }

  uint32_t leaves() const { return level_size[depth]; }
  uint32_t internal_count() const { return ioff[depth - 1] + level_size[depth - 1]; }
  // domain of the action on all vertices of levels 1..n
  uint32_t vertex_domain(int n) const { return voff[n - 1] + level_size[n]; }
  uint32_t internal_index(int level, uint32_t value) const { return ioff[level] + value; }

  bool operator==(const TreeGeometry& o) const { return d == o.d && depth == o.depth; }

private:
  void init();
};

// Automorphism of T^depth stored as a portrait: one permutation of {0..d-1}
// per internal vertex (levels 0..depth-1). Immutable after construction.
class TreeAut {
public:
  TreeAut() = default;
  static TreeAut identity(const TreeGeometry& geo);
  TreeAut(const TreeGeometry& geo, std::vector<Perm> labels);

  const TreeGeometry& geometry() const { return geo_; }
  int depth() const { return geo_.depth; }
  const Perm& label(int level, uint32_t value) const {
    return labels_[geo_.internal_index(level, value)];
  }

  // image of a level-k vertex
  uint32_t apply(int level, uint32_t value) const;
  bool is_identity() const;

  Perm to_leaf_perm() const;
  // permutation of all vertices of levels 1..n (n <= depth)
  Perm to_vertex_perm(int n) const;

  friend TreeAut compose(const TreeAut& a, const TreeAut& b);
  TreeAut inverse() const;

  bool operator==(const TreeAut& o) const { return labels_ == o.labels_; }

private:
  TreeGeometry geo_;
  std::vector<Perm> labels_;
};

TreeAut section(const TreeAut& a, int level, uint32_t value, int k);
TreeAut project(const TreeAut& a, int k);
// identity everywhere except the subtree at the level-`level` vertex `value`,
// which carries a; result lives at depth level + a.depth() in a d-regular tree
// truncated at target_depth
TreeAut embed(const TreeAut& a, int level, uint32_t value, int target_depth);

// Leaf-table conversions. from_leaf_perm rejects tables that break a level
// block partition (not induced by a tree automorphism).
std::optional<TreeAut> tree_aut_from_leaf_perm(const TreeGeometry& geo, const Perm& leaf);
// vertex image of a leaf permutation known to preserve blocks
uint32_t leaf_perm_vertex_image(const TreeGeometry& geo, const Perm& leaf, int level,
                                uint32_t value);
Perm leaf_to_vertex_perm(const TreeGeometry& geo, const Perm& leaf, int n);

// Textual element notation on points 1..degree: either an image list
// "1 4 2 3" or disjoint cycles "(1,4,2,3)". Returns nullopt with message on
// malformed input.
std::optional<Perm> parse_perm(const std::string& text, unsigned degree, std::string* err);
std::string format_image_list(const Perm& p);
std::string format_cycles(const Perm& p);

}  // namespace ftc
