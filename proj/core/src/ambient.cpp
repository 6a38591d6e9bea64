#include "ftc/ambient.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>

namespace ftc {

namespace {

void hash_mix(uint64_t& h1, uint64_t& h2, uint64_t v) {
  h1 ^= v + 0x9e3779b97f4a7c15ull + (h1 << 12) + (h1 >> 4);
  h2 = h2 * 0x100000001b3ull ^ v;
}

}  // namespace

std::string SubKey::hex() const {
  char buf[64];
  snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(h1),
           static_cast<unsigned long long>(h2));
  return buf;
}

Ambient::Ambient(int d, int depth, bool cyclic) : geo_(d, depth), cyclic_(cyclic) {
  // alphabet permutations allowed at each vertex
  std::vector<Perm> labels;
  if (cyclic) {
    std::vector<uint16_t> cyc(d);
    for (int i = 0; i < d; ++i) cyc[i] = static_cast<uint16_t>((i + 1) % d);
    labels.emplace_back(std::move(cyc));
  } else {
    for (int x = 0; x + 1 < d; ++x) {
      std::vector<uint16_t> img(d);
      for (int i = 0; i < d; ++i) img[i] = static_cast<uint16_t>(i);
      std::swap(img[x], img[x + 1]);
      labels.emplace_back(std::move(img));
    }
  }

  // expected order: |L|^{#internal vertices}
  {
    double lorder = cyclic ? d : 1;
    if (!cyclic)
      for (int i = 2; i <= d; ++i) lorder *= i;
    double expect = 1;
    for (uint32_t i = 0; i < geo_.internal_count(); ++i) {
      expect *= lorder;
      if (expect > static_cast<double>(kMaxElements))
        throw std::length_error("ambient group too large to enumerate");
    }
  }

  TreeGeometry label_geo(d, 1);
  std::vector<Perm> gens;
  for (const Perm& lab : labels) {
    TreeAut a(label_geo, {lab});
    for (int k = 0; k < depth; ++k)
      for (uint32_t v = 0; v < geo_.level_size[k]; ++v)
        gens.push_back(embed(a, k, v, depth).to_leaf_perm());
  }

  // BFS closure, then sort for canonical indexing
  std::unordered_map<Perm, uint32_t, PermHash> seen;
  std::deque<Perm> queue;
  Perm idp(geo_.leaves());
  seen.emplace(idp, 0);
  queue.push_back(idp);
  while (!queue.empty()) {
    Perm e = std::move(queue.front());
    queue.pop_front();
    for (const Perm& g : gens) {
      Perm p = g * e;
      if (seen.emplace(p, 0).second) queue.push_back(p);
    }
  }
  elems_.reserve(seen.size());
  for (const auto& [p, _] : seen) elems_.push_back(p);
  std::sort(elems_.begin(), elems_.end());
  idx_.reserve(elems_.size() * 2);
  for (uint32_t i = 0; i < elems_.size(); ++i) idx_.emplace(elems_[i], i);
  id_ = idx_.at(idp);

  if (depth > 1) lower_ = std::make_unique<Ambient>(d, depth - 1, cyclic);

  inv_.resize(elems_.size());
  proj_.resize(elems_.size());
  sec_.resize(elems_.size() * static_cast<size_t>(d));
  st1_.resize(elems_.size());
  for (uint32_t i = 0; i < elems_.size(); ++i) {
    inv_[i] = idx_.at(elems_[i].inverse());
    TreeAut a = *tree_aut_from_leaf_perm(geo_, elems_[i]);
    st1_[i] = a.label(0, 0).is_identity() ? 1 : 0;
    if (lower_) {
      proj_[i] = lower_->index_of(project(a, depth - 1).to_leaf_perm());
      for (int x = 0; x < d; ++x)
        sec_[static_cast<size_t>(i) * d + x] =
            lower_->index_of(section(a, 1, static_cast<uint32_t>(x), depth - 1).to_leaf_perm());
    } else {
      proj_[i] = 0;
      for (int x = 0; x < d; ++x) sec_[static_cast<size_t>(i) * d + x] = 0;
    }
  }

  for (const Perm& g : gens) {
    uint32_t gi = idx_.at(g);
    if (std::find(gen_idx_.begin(), gen_idx_.end(), gi) == gen_idx_.end())
      gen_idx_.push_back(gi);
  }
  std::sort(gen_idx_.begin(), gen_idx_.end());
}

std::optional<uint32_t> Ambient::try_index(const Perm& p) const {
  auto it = idx_.find(p);
  if (it == idx_.end()) return std::nullopt;
  return it->second;
}

uint32_t Ambient::index_of(const Perm& p) const {
  auto it = idx_.find(p);
  if (it == idx_.end()) throw std::out_of_range("element outside ambient");
  return it->second;
}

std::vector<uint32_t> Ambient::close(const std::vector<uint32_t>& gens) const {
  std::vector<bool> seen(elems_.size(), false);
  seen[id_] = true;
  std::deque<uint32_t> queue{id_};
  while (!queue.empty()) {
    uint32_t e = queue.front();
    queue.pop_front();
    for (uint32_t g : gens) {
      uint32_t p = mul(g, e);
      if (!seen[p]) {
        seen[p] = true;
        queue.push_back(p);
      }
    }
  }
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < seen.size(); ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

std::vector<uint32_t> Ambient::all_indices() const {
  std::vector<uint32_t> out(elems_.size());
  for (uint32_t i = 0; i < elems_.size(); ++i) out[i] = i;
  return out;
}

std::vector<uint32_t> Ambient::reduce_gens(const std::vector<uint32_t>& sorted_elems) const {
  // greedy: scan elements in canonical order, keep those enlarging the
  // closure. Old elements only need products with the newest generator; new
  // elements propagate with every generator.
  std::vector<uint32_t> gens;
  std::vector<bool> in(elems_.size(), false);
  std::vector<uint32_t> current{id_};
  in[id_] = true;
  for (uint32_t e : sorted_elems) {
    if (in[e]) continue;
    gens.push_back(e);
    size_t frontier_start = current.size();
    for (size_t i = 0; i < frontier_start; ++i) {
      uint32_t p = mul(current[i], e);
      if (!in[p]) {
        in[p] = true;
        current.push_back(p);
      }
    }
    for (size_t i = frontier_start; i < current.size(); ++i) {
      for (uint32_t g : gens) {
        uint32_t p = mul(current[i], g);
        if (!in[p]) {
          in[p] = true;
          current.push_back(p);
        }
      }
    }
    if (current.size() == sorted_elems.size()) break;
  }
  return gens;
}

SubKey Ambient::key_of(const std::vector<uint32_t>& sorted_elems) const {
  SubKey k;
  k.order = sorted_elems.size();
  k.h1 = 0xcbf29ce484222325ull;
  k.h2 = 0x9e3779b97f4a7c15ull;
  for (uint32_t e : sorted_elems)
    for (uint16_t v : elems_[e].images()) hash_mix(k.h1, k.h2, v + 1);
  return k;
}

bool Ambient::admits(const Perm& leaf) const {
  if (leaf.degree() != geo_.leaves()) return false;
  auto a = tree_aut_from_leaf_perm(geo_, leaf);
  if (!a) return false;
  if (!cyclic_) return true;
  // every label must be a power of the d-cycle
  std::vector<uint16_t> cyc(geo_.d);
  for (int i = 0; i < geo_.d; ++i) cyc[i] = static_cast<uint16_t>((i + 1) % geo_.d);
  Perm c{cyc};
  std::vector<Perm> powers;
  Perm acc(static_cast<unsigned>(geo_.d));
  for (int i = 0; i < geo_.d; ++i) {
    powers.push_back(acc);
    acc = c * acc;
  }
  for (int k = 0; k < geo_.depth; ++k)
    for (uint32_t v = 0; v < geo_.level_size[k]; ++v) {
      const Perm& lab = a->label(k, v);
      if (std::find(powers.begin(), powers.end(), lab) == powers.end()) return false;
    }
  return true;
}

Subgroup make_subgroup(const Ambient& amb, const std::vector<uint32_t>& gen_idx) {
  Subgroup s;
  s.elems = amb.close(gen_idx);
  s.order = s.elems.size();
  s.gens = amb.reduce_gens(s.elems);
  s.key = amb.key_of(s.elems);
  return s;
}

Subgroup subgroup_from_elems(const Ambient& amb, std::vector<uint32_t> elems) {
  Subgroup s;
  s.elems = std::move(elems);
  s.order = s.elems.size();
  s.gens = amb.reduce_gens(s.elems);
  s.key = amb.key_of(s.elems);
  return s;
}

}  // namespace ftc
