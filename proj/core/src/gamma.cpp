#include "ftc/gamma.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "ftc/subgroups.hpp"

namespace ftc {

namespace {

}  // namespace

int GammaAmbient::Orbit::find(const SubKey& k) const {
  for (size_t i = 0; i < keys.size(); ++i)
    if (keys[i] == k) return static_cast<int>(i);
  return -1;
}

GammaAmbient::GammaAmbient(int d, int depth) : d_(d), depth_(depth) {
  TreeGeometry geo(d, depth);
  double full_order = 1;
  double lfact = 1;
  for (int i = 2; i <= d; ++i) lfact *= i;
  for (uint32_t i = 0; i < geo.internal_count(); ++i) full_order *= lfact;
  if (full_order <= static_cast<double>(Ambient::kMaxElements)) {
    base_ = std::make_unique<Ambient>(d, depth, false);
    return;
  }
  if (d != 3)
    throw std::length_error("conjugation ambient too large and no decomposition known");
  decomposed_ = true;
  base_ = std::make_unique<Ambient>(d, depth, true);
}

// Conjugators from a cyclic-label subgroup onto another have sign portraits
// (the transposition part of each label) constant on the subgroup's vertex
// orbits: the label of rpr^-1 at w multiplies the labels of r at u and p(u),
// and it must land in the cyclic part. Such sign portraits conjugate the
// cyclic-label part into itself, so every candidate factors as
// (cyclic part element) * (orbit-constant transposition lift).
std::vector<Perm> GammaAmbient::orbit_lifts(const std::vector<Perm>& elems) const {
  TreeGeometry geo(d_, depth_);
  if (!decomposed_) return {Perm(geo.leaves())};

  // orbit classes of the internal vertices under the subgroup action
  std::vector<int> cls(geo.internal_count());
  for (size_t i = 0; i < cls.size(); ++i) cls[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (cls[x] != x) x = cls[x] = cls[cls[x]];
    return x;
  };
  for (const Perm& e : elems)
    for (int k = 1; k < depth_; ++k)
      for (uint32_t v = 0; v < geo.level_size[k]; ++v) {
        uint32_t w = leaf_perm_vertex_image(geo, e, k, v);
        int a = find(static_cast<int>(geo.internal_index(k, v)));
        int b = find(static_cast<int>(geo.internal_index(k, w)));
        if (a != b) cls[a] = b;
      }
  std::vector<int> reps;
  std::vector<int> rep_of(cls.size());
  for (size_t i = 0; i < cls.size(); ++i) {
    int r = find(static_cast<int>(i));
    auto it = std::find(reps.begin(), reps.end(), r);
    if (it == reps.end()) {
      rep_of[i] = static_cast<int>(reps.size());
      reps.push_back(r);
    } else {
      rep_of[i] = static_cast<int>(it - reps.begin());
    }
  }
  if (reps.size() > 16)
    throw std::length_error("too many vertex orbits for the sign-lift scan");

  std::vector<uint16_t> tau(d_);
  for (int i = 0; i < d_; ++i) tau[i] = static_cast<uint16_t>(i);
  std::swap(tau[0], tau[1]);
  Perm tau_p{tau};
  std::vector<Perm> lifts;
  for (uint32_t mask = 0; mask < (1u << reps.size()); ++mask) {
    std::vector<Perm> labels(geo.internal_count());
    for (size_t i = 0; i < cls.size(); ++i)
      labels[i] = (mask >> rep_of[i]) & 1 ? tau_p : Perm(static_cast<unsigned>(d_));
    lifts.push_back(TreeAut(geo, std::move(labels)).to_leaf_perm());
  }
  return lifts;
}

std::vector<uint32_t> GammaAmbient::to_base(const std::vector<Perm>& elems) const {
  std::vector<uint32_t> out;
  out.reserve(elems.size());
  for (const Perm& e : elems) {
    auto idx = base_->try_index(e);
    if (!idx)
      throw std::invalid_argument(
          "pattern subgroup is outside the cyclic-label part of the decomposed ambient");
    out.push_back(*idx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void GammaAmbient::build_conj_tables() const {
  if (!conj_tables_.empty()) return;
  const std::vector<uint32_t>& gens = base_->generator_indices();
  conj_tables_.resize(gens.size());
  for (size_t gi = 0; gi < gens.size(); ++gi) {
    uint32_t g = gens[gi], ginv = base_->inv(g);
    std::vector<uint32_t>& t = conj_tables_[gi];
    t.resize(base_->size());
    for (uint32_t e = 0; e < base_->size(); ++e) t[e] = base_->mul(base_->mul(g, e), ginv);
  }
}

GammaAmbient::Orbit GammaAmbient::conj_orbit(const std::vector<uint32_t>& elems,
                                             bool want_schreier) const {
  build_conj_tables();
  Orbit orb;
  std::unordered_map<SubKey, int, SubKeyHash> pos;
  std::vector<std::vector<uint32_t>> sets{elems};
  orb.keys.push_back(base_->key_of(elems));
  orb.transversal.push_back(base_->id());
  pos.emplace(orb.keys[0], 0);
  const std::vector<uint32_t>& gens = base_->generator_indices();
  for (size_t qi = 0; qi < sets.size(); ++qi) {
    std::vector<uint32_t> cur = sets[qi];  // copy: sets grows
    for (size_t gi = 0; gi < gens.size(); ++gi) {
      const std::vector<uint32_t>& table = conj_tables_[gi];
      std::vector<uint32_t> img;
      img.reserve(cur.size());
      for (uint32_t e : cur) img.push_back(table[e]);
      std::sort(img.begin(), img.end());
      SubKey k = base_->key_of(img);
      auto [it, fresh] = pos.emplace(k, static_cast<int>(orb.keys.size()));
      if (fresh) {
        orb.keys.push_back(k);
        orb.transversal.push_back(base_->mul(gens[gi], orb.transversal[qi]));
        sets.push_back(std::move(img));
      } else if (want_schreier) {
        // u_j^-1 g u_i fixes the orbit point, hence normalizes the subgroup
        orb.schreier.push_back(base_->mul(base_->inv(orb.transversal[it->second]),
                                          base_->mul(gens[gi], orb.transversal[qi])));
      }
    }
  }
  return orb;
}

std::optional<Perm> GammaAmbient::find_conjugator(const std::vector<Perm>& p_elems,
                                                  const std::vector<Perm>& q_elems) {
  if (p_elems.size() != q_elems.size()) return std::nullopt;
  std::vector<uint32_t> q = to_base(q_elems);
  std::vector<uint32_t> p = to_base(p_elems);
  Orbit orb = conj_orbit(q, false);
  std::unordered_map<SubKey, int, SubKeyHash> pos;
  for (size_t i = 0; i < orb.keys.size(); ++i) pos.emplace(orb.keys[i], static_cast<int>(i));
  for (const Perm& s : orbit_lifts(p_elems)) {
    // key of s P s^-1 (lands back in the base part, which is normal)
    std::vector<uint32_t> img;
    img.reserve(p.size());
    Perm si = s.inverse();
    for (uint32_t e : p) {
      auto idx = base_->try_index(s * base_->elem(e) * si);
      if (!idx) throw std::logic_error("conjugate left the normal base part");
      img.push_back(*idx);
    }
    std::sort(img.begin(), img.end());
    auto it = pos.find(base_->key_of(img));
    if (it == pos.end()) continue;
    // u (s P s^-1) u^-1 = Q for u = transversal^-1
    Perm u = base_->elem(base_->inv(orb.transversal[it->second]));
    return u * s;
  }
  return std::nullopt;
}

std::vector<Perm> GammaAmbient::normalizer_elements(const std::vector<Perm>& q_elems,
                                                    uint64_t bound) {
  std::vector<uint32_t> q = to_base(q_elems);
  Orbit orb = conj_orbit(q, true);
  std::unordered_map<SubKey, int, SubKeyHash> pos;
  for (size_t i = 0; i < orb.keys.size(); ++i) pos.emplace(orb.keys[i], static_cast<int>(i));

  std::vector<Perm> gens;
  GroupBuilder keep(q_elems.empty() ? 1 : q_elems[0].degree());
  auto push_gen = [&](const Perm& g) {
    if (keep.add(g)) gens.push_back(g);
  };
  for (uint32_t word : orb.schreier) push_gen(base_->elem(word));
  // lift contributions
  if (decomposed_) {
    for (const Perm& s : orbit_lifts(q_elems)) {
      if (s.is_identity()) continue;
      std::vector<uint32_t> img;
      img.reserve(q.size());
      Perm si = s.inverse();
      bool inside = true;
      for (uint32_t e : q) {
        auto idx = base_->try_index(s * base_->elem(e) * si);
        if (!idx) {
          inside = false;
          break;
        }
        img.push_back(*idx);
      }
      if (!inside) continue;
      std::sort(img.begin(), img.end());
      auto it = pos.find(base_->key_of(img));
      if (it == pos.end()) continue;
      push_gen(base_->elem(base_->inv(orb.transversal[it->second])) * s);
    }
  }
  for (const Perm& e : q_elems) push_gen(e);

  // element closure
  std::set<Perm> seen;
  unsigned degree = gens.empty() ? 1 : gens[0].degree();
  seen.insert(Perm(degree));
  std::deque<Perm> queue{Perm(degree)};
  while (!queue.empty()) {
    Perm e = std::move(queue.front());
    queue.pop_front();
    for (const Perm& g : gens) {
      Perm p = g * e;
      if (seen.insert(p).second) {
        if (seen.size() > bound)
          throw std::length_error("normalizer exceeds the enumeration bound");
        queue.push_back(p);
      }
    }
  }
  return std::vector<Perm>(seen.begin(), seen.end());
}

size_t GammaGraph::edge_count() const {
  size_t n = 0;
  for (const auto& adj : edges) n += adj.size();
  return n;
}

std::string GammaGraph::dot() const {
  std::string out = "digraph gamma {\n";
  for (size_t i = 0; i < vertex_reps.size(); ++i)
    out += "  v" + std::to_string(i) + ";\n";
  for (size_t i = 0; i < edges.size(); ++i)
    for (int j : edges[i])
      out += "  v" + std::to_string(i) + " -> v" + std::to_string(j) + ";\n";
  out += "}\n";
  return out;
}

namespace {

// cycle detection with an explicit witness cycle
bool find_cycle(const std::vector<std::vector<int>>& edges, std::vector<int>& cycle) {
  size_t n = edges.size();
  std::vector<int> color(n, 0), parent(n, -1);
  for (size_t s = 0; s < n; ++s) {
    if (color[s]) continue;
    std::vector<std::pair<int, size_t>> stack{{static_cast<int>(s), 0}};
    color[s] = 1;
    while (!stack.empty()) {
      auto& [v, ei] = stack.back();
      if (ei < edges[v].size()) {
        int w = edges[v][ei++];
        if (color[w] == 1) {
          // back edge: recover v -> ... -> w? the cycle is w .. v
          cycle.clear();
          int cur = v;
          cycle.push_back(w);
          while (cur != w) {
            cycle.push_back(cur);
            cur = parent[cur];
          }
          std::reverse(cycle.begin() + 1, cycle.end());
          return true;
        }
        if (color[w] == 0) {
          color[w] = 1;
          parent[w] = v;
          stack.emplace_back(w, 0);
        }
      } else {
        color[v] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

}  // namespace

GammaGraph gamma_graph(GammaAmbient& amb, const std::vector<Perm>& p_elems,
                       const std::vector<Perm>& q_elems) {
  GammaGraph g;
  std::optional<Perm> r0 = amb.find_conjugator(p_elems, q_elems);
  if (!r0) return g;
  g.empty = false;
  g.r0 = r0;

  TreeGeometry geo(amb.d(), amb.depth());
  std::unordered_set<Perm, PermHash> q_set(q_elems.begin(), q_elems.end());

  // classes of S_PQ/~ = right cosets Q n r0 over N(Q)
  std::vector<Perm> nq = amb.normalizer_elements(q_elems);
  std::vector<Perm> reps;
  {
    std::unordered_set<Perm, PermHash> covered;
    for (const Perm& n : nq) {  // nq sorted: first of each coset is minimal
      if (covered.count(n)) continue;
      reps.push_back(n);
      for (const Perm& q : q_elems) covered.insert(q * n);
    }
  }
  for (const Perm& n : reps) g.vertex_reps.push_back(n * *r0);

  // pi_{D-1}(Q) and projections of the vertex representatives
  std::unordered_set<Perm, PermHash> q_proj;
  for (const Perm& q : q_elems)
    q_proj.insert(project(*tree_aut_from_leaf_perm(geo, q), amb.depth() - 1).to_leaf_perm());
  std::vector<Perm> rep_proj_inv;
  for (const Perm& r : g.vertex_reps)
    rep_proj_inv.push_back(
        project(*tree_aut_from_leaf_perm(geo, r), amb.depth() - 1).to_leaf_perm().inverse());

  g.edges.assign(g.vertex_reps.size(), {});
  for (size_t i = 0; i < g.vertex_reps.size(); ++i) {
    TreeAut ri = *tree_aut_from_leaf_perm(geo, g.vertex_reps[i]);
    std::vector<Perm> secs;
    for (int x = 0; x < amb.d(); ++x)
      secs.push_back(section(ri, 1, static_cast<uint32_t>(x), amb.depth() - 1).to_leaf_perm());
    for (size_t j = 0; j < g.vertex_reps.size(); ++j) {
      bool all = true;
      for (int x = 0; x < amb.d() && all; ++x)
        all = q_proj.count(secs[x] * rep_proj_inv[j]) > 0;
      if (all) g.edges[i].push_back(static_cast<int>(j));
    }
  }
  g.has_cycle = find_cycle(g.edges, g.cycle);
  return g;
}

ConjugacyResult are_conjugate(GammaAmbient& amb, const std::vector<Perm>& p_elems,
                              const std::vector<Perm>& q_elems, bool p_fractal) {
  ConjugacyResult out;
  out.graph = gamma_graph(amb, p_elems, q_elems);
  if (out.graph.has_cycle) {
    out.verdict = ConjugacyVerdict::Conjugate;
    for (int v : out.graph.cycle) out.witness_cycle.push_back(out.graph.vertex_reps[v]);
  } else {
    out.verdict = p_fractal ? ConjugacyVerdict::NotConjugate : ConjugacyVerdict::Unknown;
  }
  return out;
}

TreeAut build_conjugator(const GammaGraph& graph, const std::vector<Perm>& p_elems,
                         const std::vector<Perm>& q_elems, int n) {
  if (!graph.has_cycle) throw std::invalid_argument("no cycle to build from");
  const Perm& first = graph.vertex_reps[graph.cycle[0]];
  unsigned degree = first.degree();
  int d = 0, depth = 0;
  {
    // recover geometry from the degree of the window permutations
    for (int dd = 2; dd <= 16; ++dd) {
      unsigned m = 1;
      int e = 0;
      while (m < degree) {
        m *= static_cast<unsigned>(dd);
        ++e;
      }
      if (m == degree && e >= 1) {
        d = dd;
        depth = e;
        break;
      }
    }
  }
  TreeGeometry win_geo(d, depth);
  TreeGeometry out_geo(d, n);

  // map pi_{D-1} image -> one element of Q realizing it
  std::unordered_map<Perm, Perm, PermHash> q_lift;
  for (const Perm& q : q_elems)
    q_lift.emplace(project(*tree_aut_from_leaf_perm(win_geo, q), depth - 1).to_leaf_perm(), q);

  size_t cyc_len = graph.cycle.size();
  std::unordered_set<Perm, PermHash> q_set(q_elems.begin(), q_elems.end());

  // assign a window to every vertex of T^n, level by level around the cycle
  std::vector<std::vector<TreeAut>> windows(n + 1);
  windows[0].push_back(*tree_aut_from_leaf_perm(win_geo, first));
  for (int lvl = 0; lvl < n; ++lvl) {
    const Perm& next_rep = graph.vertex_reps[graph.cycle[(lvl + 1) % cyc_len]];
    Perm next_proj =
        project(*tree_aut_from_leaf_perm(win_geo, next_rep), depth - 1).to_leaf_perm();
    windows[lvl + 1].reserve(windows[lvl].size() * d);
    for (const TreeAut& w : windows[lvl])
      for (int x = 0; x < d; ++x) {
        Perm target = section(w, 1, static_cast<uint32_t>(x), depth - 1).to_leaf_perm();
        auto it = q_lift.find(target * next_proj.inverse());
        if (it == q_lift.end())
          throw std::logic_error("witness cycle does not extend: edge test violated");
        windows[lvl + 1].push_back(
            *tree_aut_from_leaf_perm(win_geo, it->second * next_rep));
      }
  }

  // conditions (a) and (b) at every assigned window
  for (int lvl = 0; lvl <= n; ++lvl) {
    const Perm& w0 = windows[lvl][0].to_leaf_perm();
    for (const TreeAut& w : windows[lvl]) {
      Perm wp = w.to_leaf_perm();
      if (!(q_set.count(wp * w0.inverse())))
        throw std::logic_error("witness windows of one level differ modulo Q");
      for (const Perm& p : p_elems)
        if (!q_set.count(wp * p * wp.inverse()))
          throw std::logic_error("witness window does not conjugate P into Q");
    }
  }

  // assemble the portrait: the label of g at v is the root label of its window
  std::vector<Perm> labels(out_geo.internal_count());
  for (int lvl = 0; lvl < n; ++lvl)
    for (uint32_t v = 0; v < out_geo.level_size[lvl]; ++v)
      labels[out_geo.internal_index(lvl, v)] = windows[lvl][v].label(0, 0);
  return TreeAut(out_geo, std::move(labels));
}

std::string RigidityStatus::str() const {
  switch (kind) {
    case RigidityKind::Rigid: return "Rigid(" + criterion + ")";
    case RigidityKind::NotRigid: return "NotRigid(" + criterion + ")";
    default: return "Unknown";
  }
}

RigidityGraph rigidity_graph(PatternAnalysis& pa) {
  RigidityGraph g;
  const TreeGeometry& geo = pa.geometry();
  int D = geo.depth;
  uint32_t leaf = geo.level_size[D] - 1;  // rightmost level-D vertex
  for (const Perm& e : pa.elements())
    if (e[leaf] == leaf) g.vertices.push_back(e);
  uint32_t w1 = static_cast<uint32_t>(geo.d - 1);
  std::vector<Perm> sections, projections;
  for (const Perm& t : g.vertices) {
    TreeAut a = *tree_aut_from_leaf_perm(geo, t);
    sections.push_back(D == 1 ? Perm(1u) : section(a, 1, w1, D - 1).to_leaf_perm());
    projections.push_back(D == 1 ? Perm(1u) : project(a, D - 1).to_leaf_perm());
  }
  g.edges.assign(g.vertices.size(), {});
  for (size_t i = 0; i < g.vertices.size(); ++i)
    for (size_t j = 0; j < g.vertices.size(); ++j)
      if (sections[i] == projections[j]) g.edges[i].push_back(static_cast<int>(j));

  // a cycle with a path to a vertex acting non-trivially below the rightmost
  // level-(D-2) vertex
  std::vector<int> cycle;
  if (!find_cycle(g.edges, cycle)) return g;
  std::vector<bool> on_stack(g.vertices.size(), false);
  std::deque<int> queue(cycle.begin(), cycle.end());
  for (int v : cycle) on_stack[v] = true;
  std::vector<bool> deep(g.vertices.size(), false);
  for (size_t i = 0; i < g.vertices.size(); ++i) {
    TreeAut a = *tree_aut_from_leaf_perm(geo, g.vertices[i]);
    TreeAut sec = D == 2 ? a : section(a, D - 2, geo.level_size[D - 2] - 1, 2);
    deep[i] = !sec.is_identity();
  }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (deep[v]) {
      g.criterion_met = true;
      break;
    }
    for (int w : g.edges[v])
      if (!on_stack[w]) {
        on_stack[w] = true;
        queue.push_back(w);
      }
  }
  return g;
}

RigidityStatus rigidity_status(PatternAnalysis& pa) {
  RigidityStatus out;
  if (pa.finite()) throw std::invalid_argument("rigidity asks for an infinite pattern");
  uint64_t p = static_cast<uint64_t>(pa.d());
  bool wp = pa.is_wp_contained();

  if (wp && pa.fractality() != Fractality::NotFractal) {
    // rigid iff pi_2 is not C_p x C_p (an equivalence)
    std::unordered_set<Perm, PermHash> pi2_set;
    const TreeGeometry& geo = pa.geometry();
    if (geo.depth >= 2) {
      for (const Perm& e : pa.elements())
        pi2_set.insert(project(*tree_aut_from_leaf_perm(geo, e), 2).to_leaf_perm());
    } else {
      const PermGroup& t2 = pa.truncation(2);
      for (const Perm& e : t2.elements(100000)) pi2_set.insert(e);
    }
    bool is_cpxcp = pi2_set.size() == p * p;
    if (is_cpxcp) {
      std::vector<Perm> v(pi2_set.begin(), pi2_set.end());
      for (size_t i = 0; i < v.size() && is_cpxcp; ++i) {
        if (v[i].order() > p) is_cpxcp = false;
        for (size_t j = i + 1; j < v.size() && is_cpxcp; ++j)
          is_cpxcp = v[i] * v[j] == v[j] * v[i];
      }
    }
    out.kind = is_cpxcp ? RigidityKind::NotRigid : RigidityKind::Rigid;
    out.criterion = "wp-fractal";
    return out;
  }

  BranchingInfo b = pa.maximal_branching();
  {
    PermGroup kt(pa.geometry().leaves(), b.ktilde_gens);
    std::vector<Perm> vgens;
    for (const Perm& g : b.ktilde_gens)
      vgens.push_back(leaf_to_vertex_perm(pa.geometry(), g, 1));
    PermGroup kt1(static_cast<unsigned>(pa.d()), vgens.empty() ? std::vector<Perm>{}
                                                               : vgens);
    if (!vgens.empty() && kt1.is_transitive_on(0, static_cast<unsigned>(pa.d()))) {
      out.kind = RigidityKind::Rigid;
      out.criterion = "branching-transitive";
      return out;
    }
  }

  if (wp) {
    RigidityGraph g = rigidity_graph(pa);
    if (g.criterion_met) {
      out.kind = RigidityKind::Rigid;
      out.criterion = "wp-gamma";
      return out;
    }
  }
  return out;
}

StableQuotient stable_characteristic_quotient(PatternAnalysis& pa,
                                              CharacteristicFunctor functor, int k,
                                              int n_max) {
  BranchingInfo b = pa.maximal_branching();
  if (!b.normal)
    throw std::invalid_argument("maximal branching pattern is not normal");
  StableQuotient out;
  int cap = n_max > 0 ? std::min(n_max, pa.level_cap()) : pa.level_cap();
  int D = pa.depth();

  auto apply_functor = [&](const PermGroup& g) {
    PermGroup cur = g;
    int steps = functor == CharacteristicFunctor::Derived ? 1 : k;
    if (functor == CharacteristicFunctor::LowerCentralK) {
      PermGroup gamma = g;
      for (int i = 1; i < k; ++i) {
        // [gamma, g]
        std::vector<Perm> comms;
        for (const Perm& a : gamma.generators())
          for (const Perm& s : g.generators())
            comms.push_back(a * s * a.inverse() * s.inverse());
        gamma = normal_closure(g, comms);
      }
      return gamma;
    }
    for (int i = 0; i < steps; ++i) cur = derived_subgroup(cur);
    return cur;
  };

  std::optional<PermGroup> prev_kn;
  for (int n = D; n + 1 <= cap; ++n) {
    // pi_n(K_P) for consecutive n via the level stabilizer route
    auto build_kn = [&](int lvl) {
      std::vector<Perm> gens = pa.trunc_level_stab(lvl, D - 1).generators();
      TreeGeometry geo_l(pa.d(), lvl);
      for (const Perm& g : b.ktilde_gens) {
        TreeAut a = pa.extend_element(*tree_aut_from_leaf_perm(pa.geometry(), g), lvl);
        gens.push_back(a.to_vertex_perm(lvl));
      }
      BigUint expected =
          pa.truncation(lvl).order() * BigUint(b.ktilde_order) / BigUint(pa.order());
      return PermGroup(pa.trunc_level_stab(lvl, D - 1).degree(), gens, expected);
    };
    PermGroup kn = prev_kn ? std::move(*prev_kn) : build_kn(n);
    PermGroup kn1 = build_kn(n + 1);
    BigUint i_n = kn.order() / apply_functor(kn).order();
    BigUint i_n1 = kn1.order() / apply_functor(kn1).order();
    if (i_n == i_n1) {
      out.available = true;
      out.n0 = n;
      // quotient pi_n(G_P)/F(pi_n(G_P)) as a coset action
      const PermGroup& g = pa.truncation(n);
      PermGroup f = apply_functor(g);
      BigUint idx = g.order() / f.order();
      if (!idx.fits_u64() || idx.as_u64() > 100000)
        throw std::length_error("stable quotient too large to materialize");
      uint64_t index = idx.as_u64();
      // enumerate cosets by BFS over generators
      std::vector<Perm> reps{Perm(g.degree())};
      std::vector<Perm> gens = g.generators();
      for (size_t qi = 0; qi < reps.size(); ++qi)
        for (const Perm& s : gens) {
          Perm cand = reps[qi] * s;
          bool known = false;
          for (const Perm& r : reps)
            if (f.contains(r.inverse() * cand)) {
              known = true;
              break;
            }
          if (!known) reps.push_back(cand);
        }
      if (reps.size() != index) throw std::logic_error("coset enumeration mismatch");
      // right multiplication action on cosets
      std::vector<Perm> action;
      for (const Perm& s : gens) {
        std::vector<uint16_t> img(reps.size());
        for (size_t i = 0; i < reps.size(); ++i) {
          Perm cand = reps[i] * s;
          for (size_t j = 0; j < reps.size(); ++j)
            if (f.contains(reps[j].inverse() * cand)) {
              img[i] = static_cast<uint16_t>(j);
              break;
            }
        }
        action.emplace_back(std::move(img));
      }
      PermGroup q(static_cast<unsigned>(index), action);
      out.quotient = q.elements(100000);
      out.order = out.quotient.size();
      out.name = small_group_name(out.quotient);
      return out;
    }
    prev_kn = std::move(kn1);
  }
  return out;
}

}  // namespace ftc
