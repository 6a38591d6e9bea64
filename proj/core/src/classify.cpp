#include "ftc/classify.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "ftc/subgroups.hpp"

namespace ftc {

PatternReport analyze_pattern(const PatternDatabase& db, size_t index,
                              const AnalysisOptions& opts) {
  const PatternRecord& rec = db.patterns.at(index);
  PatternAnalysis pa(db.d, db.depth, db.cyclic, rec.gens, opts.level_cap,
                     opts.element_bound);
  PatternReport r;
  r.index = index;
  r.order = pa.order();
  r.finite = pa.finite();
  r.hausdorff = pa.hausdorff();
  r.p_group = pa.is_p_group(&r.p);
  r.wp_contained = pa.is_wp_contained();
  r.fractality = pa.fractality();
  r.lt = pa.level_transitivity();
  BranchingInfo b = pa.maximal_branching();
  r.ktilde_order = b.ktilde_order;
  r.ktilde_index = b.index;
  r.ktilde_normal = b.normal;
  if (r.finite) {
    r.finite_label = small_group_name(pa.elements());
    return r;
  }
  r.tfg = pa.tfg_status();
  if (r.tfg.kind == TfgStatus::NotTFG) {
    // just-infinite would force tfg, so the index sequence cannot stabilize
    r.ji.kind = JiStatus::Undecided;
    r.ji.n = r.tfg.n;
  } else {
    r.ji = pa.just_infinite_status();
  }
  r.rigidity = rigidity_status(pa);
  return r;
}

std::vector<PatternReport> analyze_all(const PatternDatabase& db,
                                       const AnalysisOptions& opts) {
  std::vector<PatternReport> out(db.patterns.size());
  int workers = std::max(1, opts.workers);
  if (workers == 1 || db.patterns.size() < 2) {
    for (size_t i = 0; i < db.patterns.size(); ++i) out[i] = analyze_pattern(db, i, opts);
    return out;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  std::atomic<bool> failed{false};
  std::string error;
  std::mutex err_mu;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      while (!failed) {
        size_t i = next.fetch_add(1);
        if (i >= db.patterns.size()) break;
        try {
          out[i] = analyze_pattern(db, i, opts);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(err_mu);
          error = e.what();
          failed = true;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failed) throw std::runtime_error("analysis failed: " + error);
  return out;
}

namespace {

// canonical key of the conjugacy class of a pattern inside the full ambient
SubKey orbit_canonical_key(const Ambient& full, const std::vector<Perm>& elems) {
  std::vector<uint32_t> idx;
  idx.reserve(elems.size());
  for (const Perm& e : elems) idx.push_back(full.index_of(e));
  std::sort(idx.begin(), idx.end());
  SubKey best = full.key_of(idx);
  std::unordered_map<SubKey, char, SubKeyHash> seen{{best, 1}};
  std::vector<std::vector<uint32_t>> queue{idx};
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    std::vector<uint32_t> cur = queue[qi];
    for (uint32_t g : full.generator_indices()) {
      std::vector<uint32_t> img;
      img.reserve(cur.size());
      uint32_t gi = full.inv(g);
      for (uint32_t e : cur) img.push_back(full.mul(full.mul(g, e), gi));
      std::sort(img.begin(), img.end());
      SubKey k = full.key_of(img);
      if (seen.emplace(k, 1).second) {
        if (k < best) best = k;
        queue.push_back(std::move(img));
      }
    }
  }
  return best;
}

struct UnionFind {
  std::vector<size_t> parent;
  explicit UnionFind(size_t n) : parent(n) {
    for (size_t i = 0; i < n; ++i) parent[i] = i;
  }
  size_t find(size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(size_t a, size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

ClassificationReport classify(const PatternDatabase& db, const AnalysisOptions& opts,
                              bool tfg_only) {
  ClassificationReport rep;
  rep.restricted_tfg = tfg_only;
  rep.reports = analyze_all(db, opts);
  unsigned degree = 1;
  for (int i = 0; i < db.depth; ++i) degree *= static_cast<unsigned>(db.d);

  // finite patterns by abstract isomorphism
  if (!tfg_only) {
    std::vector<std::vector<Perm>> elem_cache;
    for (const PatternReport& r : rep.reports) {
      if (!r.finite) continue;
      std::vector<Perm> elems = record_elements(db.patterns[r.index], degree);
      bool placed = false;
      for (size_t c = 0; c < rep.finite_classes.size() && !placed; ++c) {
        if (elem_cache[c].size() != elems.size()) continue;
        if (small_iso(elem_cache[c], elems)) {
          rep.finite_classes[c].members.push_back(r.index);
          placed = true;
        }
      }
      if (!placed) {
        rep.finite_classes.push_back({r.finite_label, {r.index}});
        elem_cache.push_back(std::move(elems));
      }
    }
  }

  // infinite patterns: bucket by the conjugacy class of the pattern inside
  // the full ambient (S_PQ empty across buckets), then merge on gamma cycles
  std::vector<size_t> selected;
  for (const PatternReport& r : rep.reports) {
    if (r.finite) continue;
    if (tfg_only && r.tfg.kind != TfgStatus::TFG) continue;
    selected.push_back(r.index);
  }
  if (!selected.empty()) {
    std::vector<std::vector<Perm>> elems(selected.size());
    for (size_t i = 0; i < selected.size(); ++i)
      elems[i] = record_elements(db.patterns[selected[i]], degree);

    GammaAmbient gamb(db.d, db.depth);
    std::map<SubKey, std::vector<size_t>> buckets;  // positions into selected
    bool full_ok = true;
    try {
      Ambient full(db.d, db.depth, false);
      for (size_t i = 0; i < selected.size(); ++i)
        buckets[orbit_canonical_key(full, elems[i])].push_back(i);
    } catch (const std::length_error&) {
      full_ok = false;
    }
    if (!full_ok) {
      // ambient too large to enumerate: bucket by pairwise transformation
      // sets instead (bounded pattern count)
      if (selected.size() > 64)
        throw std::length_error("too many patterns to classify over the decomposed ambient");
      UnionFind pre(selected.size());
      for (size_t a = 0; a < selected.size(); ++a)
        for (size_t b = a + 1; b < selected.size(); ++b) {
          if (pre.find(a) == pre.find(b)) continue;
          if (elems[a].size() != elems[b].size()) continue;
          if (gamb.find_conjugator(elems[a], elems[b])) pre.unite(a, b);
        }
      for (size_t i = 0; i < selected.size(); ++i) {
        SubKey k;
        k.order = pre.find(i);
        buckets[k].push_back(i);
      }
    }

    UnionFind uf(selected.size());
    for (auto& [key, members] : buckets) {
      for (size_t a = 0; a < members.size(); ++a)
        for (size_t b = a + 1; b < members.size(); ++b) {
          size_t i = members[a], j = members[b];
          if (uf.find(i) == uf.find(j)) continue;
          bool fr = rep.reports[selected[i]].fractality != Fractality::NotFractal;
          ConjugacyResult cr = are_conjugate(gamb, elems[i], elems[j], fr);
          if (cr.verdict == ConjugacyVerdict::Conjugate) uf.unite(i, j);
        }
    }
    std::map<size_t, ClassificationReport::InfiniteClass> classes;
    for (size_t i = 0; i < selected.size(); ++i) {
      auto& cls = classes[uf.find(i)];
      cls.members.push_back(selected[i]);
      const PatternReport& r = rep.reports[selected[i]];
      if (r.rigidity.kind == RigidityKind::Rigid) cls.has_rigid = true;
      cls.pro_p = r.p_group;
    }
    for (auto& [root, cls] : classes) rep.infinite_classes.push_back(std::move(cls));
  }

  rep.upper = rep.finite_classes.size() + rep.infinite_classes.size();
  rep.lower = rep.finite_classes.size();
  for (bool flag : {false, true}) {
    uint64_t rigid = 0, other = 0;
    for (const auto& cls : rep.infinite_classes) {
      if (cls.pro_p != flag) continue;
      if (cls.has_rigid)
        ++rigid;
      else
        ++other;
    }
    rep.lower += rigid + (other ? 1 : 0);
  }
  return rep;
}

}  // namespace ftc
