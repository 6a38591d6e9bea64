#include "ftc/finite_type.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace ftc {

namespace {

bool prime_power_u64(uint64_t n, uint64_t& p) {
  if (n <= 1) return false;
  uint64_t f = 0;
  for (uint64_t c = 2; c * c <= n; ++c)
    if (n % c == 0) {
      f = c;
      break;
    }
  if (f == 0) f = n;
  while (n > 1) {
    if (n % f) return false;
    n /= f;
  }
  p = f;
  return true;
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t c = 2; c * c <= n; ++c)
    if (n % c == 0) return false;
  return true;
}

double log_factorial(int d) {
  double s = 0;
  for (int i = 2; i <= d; ++i) s += std::log(static_cast<double>(i));
  return s;
}

}  // namespace

const char* fractality_name(Fractality f) {
  switch (f) {
    case Fractality::NotFractal: return "NotFractal";
    case Fractality::Fractal: return "Fractal";
    case Fractality::StronglyFractal: return "StronglyFractal";
    case Fractality::SuperStronglyFractal: return "SuperStronglyFractal";
  }
  return "?";
}

std::string TfgStatus::str() const {
  switch (kind) {
    case TFG: return "TFG(" + std::to_string(n) + ")";
    case NotTFG: return "NotTFG(" + std::to_string(n) + ")";
    default: return "Undecided(" + std::to_string(n) + ")";
  }
}

std::string JiStatus::str() const {
  switch (kind) {
    case JI: return "JI(" + std::to_string(n) + ")";
    case NotLevelTransitive: return "NotLevelTransitive";
    default: return "Undecided(" + std::to_string(n) + ")";
  }
}

std::string LevelTransitivity::str() const {
  switch (kind) {
    case YesWpInfinite: return "Yes(wp-infinite)";
    case YesFractal: return "Yes(fractal)";
    case No: return "No";
    default: return "VerifiedUpTo(" + std::to_string(n) + ")";
  }
}

std::string HausdorffDim::str() const {
  if (exact) return std::to_string(num) + "/" + std::to_string(den);
  char buf[40];
  snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

TreeAut vertex_perm_to_aut(const TreeGeometry& geo, const Perm& vp) {
  std::vector<Perm> labels(geo.internal_count());
  for (int k = 0; k < geo.depth; ++k)
    for (uint32_t v = 0; v < geo.level_size[k]; ++v) {
      uint32_t iv = k == 0 ? 0 : vp[geo.voff[k - 1] + v] - geo.voff[k - 1];
      std::vector<uint16_t> lab(geo.d);
      for (int x = 0; x < geo.d; ++x) {
        uint32_t child = geo.voff[k] + v * geo.d + static_cast<uint32_t>(x);
        uint32_t img = vp[child] - geo.voff[k];
        lab[x] = static_cast<uint16_t>(img - iv * geo.d);
      }
      labels[geo.internal_index(k, v)] = Perm(std::move(lab));
    }
  return TreeAut(geo, std::move(labels));
}

PatternAnalysis::PatternAnalysis(int d, int depth, bool cyclic_ambient,
                                 std::vector<Perm> gens, int level_cap,
                                 uint64_t element_bound)
    : geo_(d, depth), cyclic_(cyclic_ambient), gens_(std::move(gens)),
      element_bound_(element_bound) {
  cap_ = level_cap > 0 ? level_cap : depth + 3;
  // keep permutation degrees inside the kernel bound 3^7
  while (cap_ > depth && std::pow(static_cast<double>(d), cap_) > 2187.0) --cap_;
  for (const Perm& g : gens_)
    if (g.degree() != geo_.leaves())
      throw std::invalid_argument("pattern generator has wrong degree");
}

int PatternAnalysis::clamp_cap(int n) const { return n > 0 ? std::min(n, cap_) : cap_; }

const std::vector<Perm>& PatternAnalysis::elements() {
  if (!elements_.empty()) return elements_;
  std::unordered_set<Perm, PermHash> seen;
  Perm idp(geo_.leaves());
  seen.insert(idp);
  elements_.push_back(idp);
  std::deque<Perm> queue{idp};
  while (!queue.empty()) {
    Perm e = std::move(queue.front());
    queue.pop_front();
    for (const Perm& g : gens_) {
      Perm p = g * e;
      if (seen.insert(p).second) {
        if (seen.size() > element_bound_)
          throw std::length_error("pattern element enumeration bound exceeded");
        elements_.push_back(p);
        queue.push_back(p);
      }
    }
  }
  std::sort(elements_.begin(), elements_.end());
  elem_index_.reserve(elements_.size() * 2);
  for (uint32_t i = 0; i < elements_.size(); ++i) elem_index_.emplace(elements_[i], i);
  return elements_;
}

uint64_t PatternAnalysis::order() { return elements().size(); }

bool PatternAnalysis::contains(const Perm& leaf) {
  elements();
  return elem_index_.count(leaf) > 0;
}

bool PatternAnalysis::is_p_group(uint64_t* p) {
  uint64_t q = 0;
  if (order() == 1) {
    if (p) *p = 0;
    return true;
  }
  if (!prime_power_u64(order(), q)) return false;
  if (p) *p = q;
  return true;
}

bool PatternAnalysis::is_wp_contained() {
  if (!is_prime(static_cast<uint64_t>(geo_.d))) return false;
  std::vector<uint16_t> cyc(geo_.d);
  for (int i = 0; i < geo_.d; ++i) cyc[i] = static_cast<uint16_t>((i + 1) % geo_.d);
  Perm c{cyc};
  std::set<Perm> powers;
  Perm acc(static_cast<unsigned>(geo_.d));
  for (int i = 0; i < geo_.d; ++i) {
    powers.insert(acc);
    acc = c * acc;
  }
  for (const Perm& g : gens_) {
    TreeAut a = *tree_aut_from_leaf_perm(geo_, g);
    for (int k = 0; k < geo_.depth; ++k)
      for (uint32_t v = 0; v < geo_.level_size[k]; ++v)
        if (!powers.count(a.label(k, v))) return false;
  }
  return true;
}

bool PatternAnalysis::is_minimal() {
  if (geo_.depth == 1) return true;
  // generator criterion: every section of every generator extends in
  // pi_{D-1}(P)
  std::unordered_set<Perm, PermHash> proj;
  for (const Perm& e : elements())
    proj.insert(project(*tree_aut_from_leaf_perm(geo_, e), geo_.depth - 1).to_leaf_perm());
  for (const Perm& g : gens_) {
    TreeAut a = *tree_aut_from_leaf_perm(geo_, g);
    for (int x = 0; x < geo_.d; ++x)
      if (!proj.count(section(a, 1, static_cast<uint32_t>(x), geo_.depth - 1).to_leaf_perm()))
        return false;
  }
  return true;
}

const std::vector<Perm>& PatternAnalysis::st_elements() {
  if (!st_elements_.empty() || order() == 0) return st_elements_;
  if (geo_.depth == 1) {
    st_elements_ = elements();
    return st_elements_;
  }
  for (const Perm& e : elements()) {
    bool fixes = true;
    for (int k = 1; k < geo_.depth && fixes; ++k)
      for (uint32_t v = 0; v < geo_.level_size[k] && fixes; ++v)
        fixes = leaf_perm_vertex_image(geo_, e, k, v) == v;
    if (fixes) st_elements_.push_back(e);
  }
  return st_elements_;
}

uint64_t PatternAnalysis::st_order() { return st_elements().size(); }

bool PatternAnalysis::finite() { return st_order() == 1; }

HausdorffDim PatternAnalysis::hausdorff() {
  HausdorffDim h;
  h.st_order = st_order();
  h.d = geo_.d;
  h.depth = geo_.depth;
  double denom = std::pow(static_cast<double>(geo_.d), geo_.depth - 1) * log_factorial(geo_.d);
  h.value = h.st_order == 1 ? 0.0 : std::log(static_cast<double>(h.st_order)) / denom;
  // exact rational: binary full tree, or prime cyclic ambient (relative to
  // the iterated wreath closure)
  uint64_t p = 0;
  bool pp = h.st_order == 1 || prime_power_u64(h.st_order, p);
  if (pp && (geo_.d == 2 || (cyclic_ && is_prime(static_cast<uint64_t>(geo_.d))))) {
    uint64_t k = 0, st = h.st_order;
    uint64_t base = geo_.d == 2 ? 2 : static_cast<uint64_t>(geo_.d);
    while (st > 1) {
      if (st % base) return h;  // st not a power of the tree prime
      st /= base;
      ++k;
    }
    uint64_t den = 1;
    for (int i = 1; i < geo_.depth; ++i) den *= static_cast<uint64_t>(geo_.d);
    uint64_t g = std::gcd(k, den);
    h.exact = true;
    h.relative = cyclic_ && geo_.d != 2;
    h.num = k == 0 ? 0 : k / g;
    h.den = k == 0 ? 1 : den / g;
  }
  return h;
}

const Perm& PatternAnalysis::complete_section(const Perm& window) {
  if (completion_.empty()) {
    for (const Perm& e : elements()) {
      Perm w = project(*tree_aut_from_leaf_perm(geo_, e), geo_.depth - 1).to_leaf_perm();
      completion_.emplace(std::move(w), e);  // first hit is the canonical min
    }
  }
  auto it = completion_.find(window);
  if (it == completion_.end())
    throw std::logic_error("section has no completing pattern: input is not minimal");
  return it->second;
}

PatternAnalysis::Trunc& PatternAnalysis::trunc(int n) {
  if (n < geo_.depth || n > cap_)
    throw std::out_of_range("truncation level " + std::to_string(n) + " outside [D, cap]");
  auto it = truncs_.find(n);
  if (it != truncs_.end()) return it->second;

  if (n == geo_.depth) {
    Trunc t;
    for (const Perm& g : gens_) t.gen_auts.push_back(*tree_aut_from_leaf_perm(geo_, g));
    std::vector<Perm> vgens;
    for (const TreeAut& a : t.gen_auts) vgens.push_back(a.to_vertex_perm(n));
    t.group = PermGroup(geo_.vertex_domain(n), vgens, BigUint(order()));
    return truncs_.emplace(n, std::move(t)).first->second;
  }

  Trunc& prev = trunc(n - 1);
  TreeGeometry geo_n(geo_.d, n);
  std::vector<TreeAut> gen_auts;

  // one greedy extension per pattern generator, nested over the levels
  for (size_t gi = 0; gi < gens_.size(); ++gi)
    gen_auts.push_back(extend_element(prev.gen_auts[gi], n));

  // delta_x of the level-(D-1) stabilizer generators of the previous level
  const PermGroup& stab = trunc_level_stab(n - 1, geo_.depth - 1);
  TreeGeometry geo_prev(geo_.d, n - 1);
  for (const Perm& s : stab.generators()) {
    TreeAut sa = vertex_perm_to_aut(geo_prev, s);
    for (int x = 0; x < geo_.d; ++x)
      gen_auts.push_back(embed(sa, 1, static_cast<uint32_t>(x), n));
  }

  // order law check against the closed formula
  BigUint expected(order());
  uint64_t exponent = 0, dk = 1;
  for (int i = 1; i <= n - geo_.depth; ++i) {
    dk *= static_cast<uint64_t>(geo_.d);
    exponent += dk;
  }
  expected *= BigUint::pow(st_order(), exponent);

  std::vector<Perm> vgens;
  for (const TreeAut& a : gen_auts) vgens.push_back(a.to_vertex_perm(n));
  Trunc t;
  t.group = PermGroup(geo_n.vertex_domain(n), vgens, expected);
  t.gen_auts = std::move(gen_auts);
  return truncs_.emplace(n, std::move(t)).first->second;
}

TreeAut PatternAnalysis::extend_element(const TreeAut& a0, int to_depth) {
  TreeAut a = a0;
  while (a.depth() < to_depth) {
    int n = a.depth() + 1;
    TreeGeometry geo_n(geo_.d, n);
    std::vector<Perm> labels(geo_n.internal_count());
    for (int k = 0; k < n - 1; ++k)
      for (uint32_t v = 0; v < geo_n.level_size[k]; ++v)
        labels[geo_n.internal_index(k, v)] = a.label(k, v);
    int front = n - geo_.depth;  // frontier level whose windows need completing
    for (uint32_t v = 0; v < geo_n.level_size[front]; ++v) {
      TreeAut comp = TreeAut::identity(geo_);
      if (geo_.depth > 1) {
        Perm window = section(a, front, v, geo_.depth - 1).to_leaf_perm();
        comp = *tree_aut_from_leaf_perm(geo_, complete_section(window));
      }
      for (uint32_t w = 0; w < geo_.level_size[geo_.depth - 1]; ++w)
        labels[geo_n.internal_index(n - 1, v * geo_.level_size[geo_.depth - 1] + w)] =
            comp.label(geo_.depth - 1, w);
    }
    a = TreeAut(geo_n, std::move(labels));
  }
  return a;
}

const PermGroup& PatternAnalysis::truncation(int n) { return trunc(n).group; }

const std::vector<TreeAut>& PatternAnalysis::truncation_gen_auts(int n) {
  return trunc(n).gen_auts;
}

const PermGroup& PatternAnalysis::trunc_level_stab(int n, int k) {
  Trunc& t = trunc(n);
  auto it = t.level_stab.find(k);
  if (it != t.level_stab.end()) return it->second;
  TreeGeometry geo_n(geo_.d, n);
  unsigned cut = k >= n ? geo_n.vertex_domain(n) : geo_n.voff[k];
  PermGroup st = t.group.prefix_stabilizer(cut);
  return t.level_stab.emplace(k, std::move(st)).first->second;
}

const PermGroup& PatternAnalysis::trunc_derived(int n) {
  Trunc& t = trunc(n);
  if (!t.derived) t.derived = derived_subgroup(t.group);
  return *t.derived;
}

const PermGroup& PatternAnalysis::trunc_stab_depth_derived(int n) {
  Trunc& t = trunc(n);
  if (!t.stabD_derived)
    t.stabD_derived = derived_subgroup(trunc_level_stab(n, geo_.depth - 1));
  return *t.stabD_derived;
}

LevelTransitivity PatternAnalysis::level_transitivity(int n_cap) {
  if (lt_) return *lt_;
  LevelTransitivity out;
  int cap = clamp_cap(n_cap);
  if (is_wp_contained() && !finite()) {
    out.kind = LevelTransitivity::YesWpInfinite;
  } else if (fractality() != Fractality::NotFractal) {
    out.kind = LevelTransitivity::YesFractal;
  } else {
    out.kind = LevelTransitivity::VerifiedUpTo;
    out.n = cap;
    for (int n = 1; n <= cap; ++n) {
      const PermGroup& g = n <= geo_.depth ? truncation(geo_.depth) : truncation(n);
      TreeGeometry gg(geo_.d, std::max(n, geo_.depth));
      unsigned lo = gg.voff[n - 1];
      if (!g.is_transitive_on(lo, lo + gg.level_size[n])) {
        out.kind = LevelTransitivity::No;
        out.n = n;
        break;
      }
    }
  }
  lt_ = out;
  return out;
}

Fractality PatternAnalysis::fractality() {
  if (fractality_) return *fractality_;
  Fractality out = Fractality::NotFractal;
  int D = geo_.depth;
  if (D == 1) {
    out = truncation(1).is_transitive_on(0, geo_.d) ? Fractality::SuperStronglyFractal
                                                    : Fractality::NotFractal;
    fractality_ = out;
    return out;
  }
  bool trans1 = truncation(D).is_transitive_on(0, geo_.d);
  if (!trans1) {
    fractality_ = out;
    return out;
  }

  // |pi_{D-1}(P)|
  std::unordered_set<Perm, PermHash> proj;
  for (const Perm& e : elements())
    proj.insert(project(*tree_aut_from_leaf_perm(geo_, e), D - 1).to_leaf_perm());
  size_t target = proj.size();

  auto section_image_size = [&](const std::vector<Perm>& subset) {
    std::unordered_set<Perm, PermHash> img;
    for (const Perm& e : subset)
      img.insert(section(*tree_aut_from_leaf_perm(geo_, e), 1, 0, D - 1).to_leaf_perm());
    return img.size();
  };

  // (F) vertex stabilizer of the first level-1 vertex
  std::vector<Perm> stab_v0;
  for (const Perm& e : elements())
    if (leaf_perm_vertex_image(geo_, e, 1, 0) == 0) stab_v0.push_back(e);
  bool f_ok = section_image_size(stab_v0) == target;

  // (SF) level-1 stabilizer
  std::vector<Perm> st1;
  for (const Perm& e : elements()) {
    bool fixes = true;
    for (uint32_t v = 0; v < static_cast<uint32_t>(geo_.d) && fixes; ++v)
      fixes = leaf_perm_vertex_image(geo_, e, 1, v) == v;
    if (fixes) st1.push_back(e);
  }
  bool sf_ok = section_image_size(st1) == target;

  if (sf_ok && !f_ok) throw std::logic_error("fractality grades are not monotone");

  // (SSF) sections of the level-(D-1) stabilizer of pi_{2D-2}(G_P) at the
  // first level-(D-1) vertex; the grades are monotone, so the truncation to
  // level 2D-2 is only needed once the strongly fractal test passes
  bool ssf_ok = false;
  int m = 2 * D - 2;
  if (sf_ok && m <= cap_) {
    const PermGroup& stab = trunc_level_stab(m, D - 1);
    TreeGeometry geo_m(geo_.d, m);
    std::vector<Perm> img_gens;
    for (const Perm& s : stab.generators()) {
      TreeAut sa = vertex_perm_to_aut(geo_m, s);
      img_gens.push_back(section(sa, D - 1, 0, D - 1).to_leaf_perm());
    }
    PermGroup img_group(geo_.level_size[D - 1], img_gens);
    ssf_ok = img_group.order() == BigUint(target);
  }
  if (ssf_ok)
    out = Fractality::SuperStronglyFractal;
  else if (sf_ok)
    out = Fractality::StronglyFractal;
  else if (f_ok)
    out = Fractality::Fractal;
  fractality_ = out;
  return out;
}

TfgStatus PatternAnalysis::tfg_status(int n_max) {
  int cap = clamp_cap(n_max);
  LevelTransitivity lt = level_transitivity();
  bool lt_ok = lt.kind == LevelTransitivity::YesWpInfinite ||
               lt.kind == LevelTransitivity::YesFractal;
  for (int n = geo_.depth; n <= cap; ++n) {
    const PermGroup& stab_top = trunc_level_stab(n, n - 1);
    if (!trunc_derived(n).contains_group(stab_top)) return {TfgStatus::NotTFG, n};
    if (lt_ok && trunc_stab_depth_derived(n).contains_group(stab_top))
      return {TfgStatus::TFG, n};
  }
  return {TfgStatus::Undecided, cap};
}

JiStatus PatternAnalysis::just_infinite_status(int n_max) {
  int cap = clamp_cap(n_max);
  JiStatus out;
  LevelTransitivity lt = level_transitivity();
  if (lt.kind == LevelTransitivity::No) {
    out.kind = JiStatus::NotLevelTransitive;
    return out;
  }
  if (lt.kind == LevelTransitivity::VerifiedUpTo) {
    out.kind = JiStatus::Undecided;
    out.n = cap;
    return out;  // no sound certificate without level-transitivity
  }
  BigUint prev(0);
  for (int n = geo_.depth; n <= cap; ++n) {
    BigUint a = trunc_level_stab(n, geo_.depth - 1).order() /
                trunc_stab_depth_derived(n).order();
    out.indices.push_back(a.str());
    if (n > geo_.depth) {
      if (a < prev) throw std::logic_error("derived index sequence decreased");
      if (a == prev) {
        out.kind = JiStatus::JI;
        out.n = n - 1;
        // the stabilized certificate implies the next containment too
        if (n + 1 <= cap) {
          BigUint nxt = trunc_level_stab(n + 1, geo_.depth - 1).order() /
                        trunc_stab_depth_derived(n + 1).order();
          if (!(nxt == a)) throw std::logic_error("stabilized index sequence moved again");
          out.indices.push_back(nxt.str());
          if (!trunc_stab_depth_derived(n + 1).contains_group(trunc_level_stab(n + 1, n)))
            throw std::logic_error("JI certificate inconsistent with tfg containment");
        }
        return out;
      }
    }
    prev = a;
  }
  out.kind = JiStatus::Undecided;
  out.n = cap;
  return out;
}

BranchingInfo PatternAnalysis::maximal_branching() {
  if (branching_) return *branching_;
  BranchingInfo out;
  int D = geo_.depth;
  elements();
  std::vector<Perm> ktilde;
  if (D == 1) {
    ktilde = elements_;  // no straddle levels
  } else {
    for (const Perm& e : elements_) {
      TreeAut a = *tree_aut_from_leaf_perm(geo_, e);
      bool ok = true;
      for (int k = 1; k < D && ok; ++k) {
        TreeAut top = project(a, D - k);
        for (uint32_t w = 0; w < geo_.level_size[k] && ok; ++w)
          ok = elem_index_.count(embed(top, k, w, D).to_leaf_perm()) > 0;
      }
      if (ok) ktilde.push_back(e);
    }
  }
  out.ktilde_order = ktilde.size();
  out.index = order() / out.ktilde_order;
  // reduced generators of Ktilde
  std::unordered_set<Perm, PermHash> kt_set(ktilde.begin(), ktilde.end());
  {
    std::unordered_set<Perm, PermHash> have;
    std::vector<Perm> cur{Perm(geo_.leaves())};
    have.insert(cur[0]);
    for (const Perm& e : ktilde) {
      if (have.count(e)) continue;
      out.ktilde_gens.push_back(e);
      size_t frontier = cur.size();
      for (size_t i = 0; i < frontier; ++i) {
        Perm p = cur[i] * e;
        if (have.insert(p).second) cur.push_back(p);
      }
      for (size_t i = frontier; i < cur.size(); ++i)
        for (const Perm& g : out.ktilde_gens) {
          Perm p = cur[i] * g;
          if (have.insert(p).second) cur.push_back(p);
        }
      if (cur.size() == ktilde.size()) break;
    }
  }
  out.normal = true;
  for (const Perm& g : gens_) {
    for (const Perm& k : out.ktilde_gens)
      if (!kt_set.count(g * k * g.inverse())) {
        out.normal = false;
        break;
      }
    if (!out.normal) break;
  }
  branching_ = out;
  return out;
}

WreathPerfectReport wreath_perfect_check(int d, const std::vector<Perm>& label_gens) {
  WreathPerfectReport rep;
  PermGroup l(static_cast<unsigned>(d), label_gens);
  rep.transitive = l.is_transitive_on(0, static_cast<unsigned>(d));
  if (!rep.transitive) throw std::invalid_argument("label group is not transitive");
  rep.perfect = derived_subgroup(l).order() == l.order();
  return rep;
}

std::vector<Perm> preimage_at_depth(int d, bool cyclic, const std::vector<Perm>& gens,
                                    int from_depth, int to_depth) {
  if (to_depth < from_depth) throw std::invalid_argument("preimage: target depth too small");
  TreeGeometry from(d, from_depth);
  std::vector<Perm> out;
  // any lift of each generator (identity labels below) plus kernel generators
  for (const Perm& g : gens) {
    TreeAut a = *tree_aut_from_leaf_perm(from, g);
    out.push_back(embed(a, 0, 0, to_depth).to_leaf_perm());
  }
  TreeGeometry label_geo(d, 1);
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
  TreeGeometry to(d, to_depth);
  for (const Perm& lab : labels) {
    TreeAut la(label_geo, {lab});
    for (int k = from_depth; k < to_depth; ++k)
      for (uint32_t v = 0; v < to.level_size[k]; ++v)
        out.push_back(embed(la, k, v, to_depth).to_leaf_perm());
  }
  return out;
}

}  // namespace ftc
