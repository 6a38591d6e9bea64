#include "ftc/tree.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

namespace ftc {

void TreeGeometry::init() {
  assert(d >= 2 && depth >= 1);
  level_size.resize(depth + 1);
  level_size[0] = 1;
  for (int k = 1; k <= depth; ++k) level_size[k] = level_size[k - 1] * d;
  ioff.resize(depth);
  ioff[0] = 0;
  for (int k = 1; k < depth; ++k) ioff[k] = ioff[k - 1] + level_size[k - 1];
  voff.resize(depth);
  voff[0] = 0;
  for (int k = 1; k < depth; ++k) voff[k] = voff[k - 1] + level_size[k];
}

TreeAut TreeAut::identity(const TreeGeometry& geo) {
  std::vector<Perm> labels(geo.internal_count(), Perm(geo.d));
  return TreeAut(geo, std::move(labels));
}

TreeAut::TreeAut(const TreeGeometry& geo, std::vector<Perm> labels)
    : geo_(geo), labels_(std::move(labels)) {
  assert(labels_.size() == geo_.internal_count());
}

uint32_t TreeAut::apply(int level, uint32_t value) const {
  assert(level <= geo_.depth);
  // digits left to right; the label used at step i sits at the original prefix
  uint32_t img = 0, orig = 0;
  for (int i = level - 1; i >= 0; --i) {
    uint32_t x = (value / geo_.level_size[i]) % geo_.d;
    uint32_t y = label(level - 1 - i, orig)[x];
    img = img * geo_.d + y;
    orig = orig * geo_.d + x;
  }
  return img;
}

bool TreeAut::is_identity() const {
  for (const Perm& p : labels_)
    if (!p.is_identity()) return false;
  return true;
}

Perm TreeAut::to_leaf_perm() const {
  uint32_t n = geo_.leaves();
  std::vector<uint16_t> img(n);
  // walk leaves sharing prefix work level by level
  for (uint32_t v = 0; v < n; ++v) img[v] = static_cast<uint16_t>(apply(geo_.depth, v));
  return Perm(std::move(img));
}

Perm TreeAut::to_vertex_perm(int n) const {
  assert(n >= 1 && n <= geo_.depth);
  std::vector<uint16_t> img(geo_.vertex_domain(n));
  for (int k = 1; k <= n; ++k)
    for (uint32_t v = 0; v < geo_.level_size[k]; ++v)
      img[geo_.voff[k - 1] + v] = static_cast<uint16_t>(geo_.voff[k - 1] + apply(k, v));
  return Perm(std::move(img));
}

TreeAut compose(const TreeAut& a, const TreeAut& b) {
  if (!(a.geometry() == b.geometry()))
    throw std::invalid_argument("compose: geometry mismatch");
  const TreeGeometry& geo = a.geometry();
  std::vector<Perm> labels(geo.internal_count());
  for (int k = 0; k < geo.depth; ++k)
    for (uint32_t v = 0; v < geo.level_size[k]; ++v)
      labels[geo.internal_index(k, v)] = a.label(k, b.apply(k, v)) * b.label(k, v);
  return TreeAut(geo, std::move(labels));
}

TreeAut TreeAut::inverse() const {
  // (g^-1)|_v^1 = (g|_{g^-1(v)}^1)^-1, realized by writing each inverted
  // label at the image vertex
  std::vector<Perm> labels(geo_.internal_count());
  for (int k = 0; k < geo_.depth; ++k)
    for (uint32_t v = 0; v < geo_.level_size[k]; ++v)
      labels[geo_.internal_index(k, apply(k, v))] = label(k, v).inverse();
  return TreeAut(geo_, std::move(labels));
}

TreeAut section(const TreeAut& a, int level, uint32_t value, int k) {
  if (level + k > a.depth()) throw std::invalid_argument("section: depth overflow");
  TreeGeometry sub(a.geometry().d, k);
  std::vector<Perm> labels(sub.internal_count());
  for (int i = 0; i < k; ++i)
    for (uint32_t w = 0; w < sub.level_size[i]; ++w)
      labels[sub.internal_index(i, w)] =
          a.label(level + i, value * a.geometry().level_size[i] + w);
  return TreeAut(sub, std::move(labels));
}

TreeAut project(const TreeAut& a, int k) {
  if (k > a.depth()) throw std::invalid_argument("project: depth exceeds element");
  if (k == a.depth()) return a;
  TreeGeometry sub(a.geometry().d, k);
  std::vector<Perm> labels(sub.internal_count());
  for (int i = 0; i < k; ++i)
    for (uint32_t w = 0; w < sub.level_size[i]; ++w)
      labels[sub.internal_index(i, w)] = a.label(i, w);
  return TreeAut(sub, std::move(labels));
}

TreeAut embed(const TreeAut& a, int level, uint32_t value, int target_depth) {
  if (level + a.depth() > target_depth)
    throw std::invalid_argument("embed: depth overflow");
  TreeGeometry big(a.geometry().d, target_depth);
  std::vector<Perm> labels(big.internal_count(), Perm(big.d));
  for (int i = 0; i < a.depth(); ++i)
    for (uint32_t w = 0; w < a.geometry().level_size[i]; ++w)
      labels[big.internal_index(level + i, value * a.geometry().level_size[i] + w)] =
          a.label(i, w);
  return TreeAut(big, std::move(labels));
}

uint32_t leaf_perm_vertex_image(const TreeGeometry& geo, const Perm& leaf, int level,
                                uint32_t value) {
  uint32_t span = geo.level_size[geo.depth] / geo.level_size[level];
  return leaf[value * span] / span;
}

std::optional<TreeAut> tree_aut_from_leaf_perm(const TreeGeometry& geo, const Perm& leaf) {
  if (leaf.degree() != geo.leaves()) return std::nullopt;
  std::vector<Perm> labels(geo.internal_count());
  for (int k = 0; k < geo.depth; ++k) {
    uint32_t span = geo.level_size[geo.depth] / geo.level_size[k + 1];
    for (uint32_t v = 0; v < geo.level_size[k]; ++v) {
      std::vector<uint16_t> lab(geo.d);
      for (int x = 0; x < geo.d; ++x) {
        uint32_t child = v * geo.d + static_cast<uint32_t>(x);
        lab[x] = static_cast<uint16_t>(leaf[child * span] / span % geo.d);
      }
      labels[geo.internal_index(k, v)] = Perm(std::move(lab));
    }
  }
  TreeAut cand(geo, std::move(labels));
  if (!(cand.to_leaf_perm() == leaf)) return std::nullopt;  // broke a block partition
  return cand;
}

Perm leaf_to_vertex_perm(const TreeGeometry& geo, const Perm& leaf, int n) {
  std::vector<uint16_t> img(geo.vertex_domain(n));
  for (int k = 1; k <= n; ++k) {
    uint32_t span = geo.level_size[geo.depth] / geo.level_size[k];
    for (uint32_t v = 0; v < geo.level_size[k]; ++v)
      img[geo.voff[k - 1] + v] = static_cast<uint16_t>(geo.voff[k - 1] + leaf[v * span] / span);
  }
  return Perm(std::move(img));
}

std::optional<Perm> parse_perm(const std::string& text, unsigned degree, std::string* err) {
  auto fail = [&](const std::string& m) -> std::optional<Perm> {
    if (err) *err = m;
    return std::nullopt;
  };
  const std::string& t = text;
  if (t.find('(') != std::string::npos) {
    Perm out(degree);
    std::vector<bool> used(degree, false);
    size_t i = 0;
    auto skip_ws = [&] { while (i < t.size() && isspace((unsigned char)t[i])) ++i; };
    skip_ws();
    while (i < t.size()) {
      if (t[i] != '(') return fail("expected '('");
      ++i;
      skip_ws();
      if (i < t.size() && t[i] == ')') {  // empty cycle, identity
        ++i;
        skip_ws();
        continue;
      }
      std::vector<unsigned> cyc;
      while (true) {
        skip_ws();
        size_t j = i;
        while (j < t.size() && isdigit((unsigned char)t[j])) ++j;
        if (j == i) return fail("expected point number");
        unsigned p = static_cast<unsigned>(std::stoul(t.substr(i, j - i)));
        if (p < 1 || p > degree) return fail("point out of range");
        if (used[p - 1]) return fail("point repeated");
        used[p - 1] = true;
        cyc.push_back(p - 1);
        i = j;
        skip_ws();
        if (i < t.size() && t[i] == ',') {
          ++i;
          continue;
        }
        if (i < t.size() && t[i] == ')') {
          ++i;
          break;
        }
        return fail("expected ',' or ')'");
      }
      for (size_t k = 0; k < cyc.size(); ++k)
        out.at(cyc[k]) = static_cast<uint16_t>(cyc[(k + 1) % cyc.size()]);
      skip_ws();
    }
    return out;
  }
  std::istringstream in(text);
  std::vector<uint16_t> img;
  unsigned v;
  while (in >> v) {
    if (v < 1 || v > degree) return fail("image out of range");
    img.push_back(static_cast<uint16_t>(v - 1));
  }
  if (!in.eof()) return fail("malformed image list");
  if (img.size() != degree) return fail("image list has wrong length");
  std::vector<bool> seen(degree, false);
  for (uint16_t x : img) {
    if (seen[x]) return fail("image list is not a bijection");
    seen[x] = true;
  }
  return Perm(std::move(img));
}

std::string format_image_list(const Perm& p) {
  std::string out;
  for (unsigned i = 0; i < p.degree(); ++i) {
    if (i) out += ' ';
    out += std::to_string(p[i] + 1);
  }
  return out;
}

std::string format_cycles(const Perm& p) {
  std::string out;
  std::vector<bool> seen(p.degree(), false);
  for (unsigned i = 0; i < p.degree(); ++i) {
    if (seen[i] || p[i] == i) {
      seen[i] = true;
      continue;
    }
    out += '(';
    unsigned j = i;
    bool first = true;
    while (!seen[j]) {
      if (!first) out += ',';
      out += std::to_string(j + 1);
      seen[j] = true;
      first = false;
      j = p[j];
    }
    out += ')';
  }
  if (out.empty()) out = "()";
  return out;
}

}  // namespace ftc
