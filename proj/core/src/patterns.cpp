#include "ftc/patterns.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "ftc/perm_group.hpp"
#include "ftc/tree.hpp"

namespace ftc {

std::vector<uint8_t> lower_image_mask(const Ambient& amb,
                                      const std::vector<uint32_t>& elems) {
  std::vector<uint8_t> mask(amb.lower_size(), 0);
  for (uint32_t e : elems) mask[amb.proj(e)] = 1;
  return mask;
}

bool is_closed_under_patterns(const Ambient& amb, const std::vector<uint32_t>& k_gens,
                              const std::vector<uint32_t>& h_elems) {
  std::vector<uint8_t> mask = lower_image_mask(amb, h_elems);
  for (uint32_t s : k_gens)
    for (int x = 0; x < amb.d(); ++x)
      if (!mask[amb.sec(s, x)]) return false;
  return true;
}

std::vector<uint32_t> maximal_pattern_closed(const Ambient& amb,
                                             const std::vector<uint32_t>& h_elems) {
  std::vector<uint8_t> mask = lower_image_mask(amb, h_elems);
  std::vector<uint32_t> kept;
  kept.reserve(h_elems.size());
  for (uint32_t e : h_elems) {
    bool ok = true;
    for (int x = 0; x < amb.d() && ok; ++x) ok = mask[amb.sec(e, x)] != 0;
    if (ok) kept.push_back(e);
  }
  assert(h_elems.size() % kept.size() == 0);
  return kept;
}

std::vector<uint32_t> minimal_pattern_of(const Ambient& amb,
                                         std::vector<uint32_t> h_elems) {
  while (true) {
    std::vector<uint32_t> next = maximal_pattern_closed(amb, h_elems);
    if (next.size() == h_elems.size()) return h_elems;
    h_elems = std::move(next);
  }
}

// ------------------------------------------------------------- database io

bool leaf_in_ambient(int d, int depth, bool cyclic, const Perm& leaf) {
  TreeGeometry geo(d, depth);
  if (leaf.degree() != geo.leaves()) return false;
  auto a = tree_aut_from_leaf_perm(geo, leaf);
  if (!a) return false;
  if (!cyclic) return true;
  std::vector<uint16_t> cyc(d);
  for (int i = 0; i < d; ++i) cyc[i] = static_cast<uint16_t>((i + 1) % d);
  Perm c{cyc};
  std::vector<Perm> powers;
  Perm acc(static_cast<unsigned>(d));
  for (int i = 0; i < d; ++i) {
    powers.push_back(acc);
    acc = c * acc;
  }
  for (int k = 0; k < depth; ++k)
    for (uint32_t v = 0; v < geo.level_size[k]; ++v)
      if (std::find(powers.begin(), powers.end(), a->label(k, v)) == powers.end())
        return false;
  return true;
}

void save_database(const PatternDatabase& db, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "ftdb 1\n";
  out << "d " << db.d << "\n";
  out << "depth " << db.depth << "\n";
  out << "ambient " << (db.cyclic ? "cyclic" : "full") << "\n";
  for (size_t i = 0; i < db.patterns.size(); ++i) {
    out << "pattern " << i << "\n";
    for (const Perm& g : db.patterns[i].gens) out << "gen " << format_image_list(g) << "\n";
    out << "end\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

PatternDatabase load_database(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  PatternDatabase db;
  std::string line;
  auto next_line = [&](std::string& out_line) -> bool {
    while (std::getline(in, line)) {
      size_t h = line.find('#');
      if (h != std::string::npos) line.resize(h);
      size_t b = line.find_last_not_of(" \t\r");
      if (b == std::string::npos) continue;
      line.resize(b + 1);
      out_line = line;
      return true;
    }
    return false;
  };
  auto bad = [&](const std::string& m) -> std::runtime_error {
    return std::runtime_error(path + ": " + m);
  };
  std::string l;
  if (!next_line(l) || l != "ftdb 1") throw bad("missing ftdb 1 header");
  if (!next_line(l) || sscanf(l.c_str(), "d %d", &db.d) != 1) throw bad("missing d");
  if (!next_line(l) || sscanf(l.c_str(), "depth %d", &db.depth) != 1)
    throw bad("missing depth");
  if (!next_line(l)) throw bad("missing ambient");
  if (l == "ambient full")
    db.cyclic = false;
  else if (l == "ambient cyclic")
    db.cyclic = true;
  else
    throw bad("ambient must be full or cyclic");
  if (db.d < 2 || db.depth < 1) throw bad("invalid geometry");
  unsigned degree = 1;
  for (int i = 0; i < db.depth; ++i) degree *= static_cast<unsigned>(db.d);

  while (next_line(l)) {
    size_t want = db.patterns.size();
    if (l != "pattern " + std::to_string(want)) throw bad("expected pattern " + std::to_string(want));
    PatternRecord rec;
    while (true) {
      if (!next_line(l)) throw bad("unterminated pattern block");
      if (l == "end") break;
      if (l.rfind("gen ", 0) != 0) throw bad("expected gen or end");
      std::string err;
      auto p = parse_perm(l.substr(4), degree, &err);
      if (!p) throw bad("bad generator: " + err);
      if (!leaf_in_ambient(db.d, db.depth, db.cyclic, *p))
        throw bad("generator leaves the declared ambient");
      rec.gens.push_back(*p);
    }
    db.patterns.push_back(std::move(rec));
  }
  for (PatternRecord& rec : db.patterns) {
    PermGroup g(degree, rec.gens);
    if (!g.order().fits_u64()) throw bad("pattern order overflow");
    rec.order = g.order().as_u64();
  }
  return db;
}

std::vector<Perm> record_elements(const PatternRecord& rec, int degree, uint64_t bound) {
  std::vector<Perm> elems{Perm(static_cast<unsigned>(degree))};
  std::unordered_set<Perm, PermHash> seen(elems.begin(), elems.end());
  std::deque<Perm> queue(elems.begin(), elems.end());
  while (!queue.empty()) {
    Perm e = std::move(queue.front());
    queue.pop_front();
    for (const Perm& g : rec.gens) {
      Perm p = g * e;
      if (seen.insert(p).second) {
        if (seen.size() > bound) throw std::length_error("record_elements: bound exceeded");
        elems.push_back(p);
        queue.push_back(p);
      }
    }
  }
  std::sort(elems.begin(), elems.end());
  return elems;
}

SubKey record_key(const PatternRecord& rec, int degree) {
  std::vector<Perm> elems = record_elements(rec, degree);
  SubKey k;
  k.order = elems.size();
  k.h1 = 0xcbf29ce484222325ull;
  k.h2 = 0x9e3779b97f4a7c15ull;
  for (const Perm& e : elems)
    for (uint16_t v : e.images()) {
      k.h1 ^= (v + 1) + 0x9e3779b97f4a7c15ull + (k.h1 << 12) + (k.h1 >> 4);
      k.h2 = k.h2 * 0x100000001b3ull ^ (v + 1);
    }
  return k;
}

// ------------------------------------------------------------- enumeration

namespace {

struct WorkKey {
  uint64_t order;
  SubKey key;
  bool operator<(const WorkKey& o) const {
    if (order != o.order) return order > o.order;  // biggest order first
    return key < o.key;
  }
};

struct EnumState {
  std::map<SubKey, std::vector<Perm>> found;              // pattern key -> gens
  std::map<WorkKey, std::vector<Perm>> pending;           // worklist, gens as perms
  std::unordered_set<SubKey, SubKeyHash> pending_keys;
  std::unordered_set<SubKey, SubKeyHash> processed;
  uint64_t pops = 0;
};

bool subgroup_in_st1(const Ambient& amb, const Subgroup& s) {
  for (uint32_t g : s.gens)
    if (!amb.in_st1(g)) return false;
  return true;
}

std::vector<Perm> gens_to_perms(const Ambient& amb, const std::vector<uint32_t>& gens) {
  std::vector<Perm> out;
  out.reserve(gens.size());
  for (uint32_t g : gens) out.push_back(amb.elem(g));
  return out;
}

std::vector<uint32_t> perms_to_indices(const Ambient& amb, const std::vector<Perm>& gens) {
  std::vector<uint32_t> out;
  out.reserve(gens.size());
  for (const Perm& g : gens) out.push_back(amb.index_of(g));
  return out;
}

void write_checkpoint(const Ambient& amb, const EnumState& st, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  out << "ftck 1\n";
  out << "d " << amb.d() << "\n";
  out << "depth " << amb.depth() << "\n";
  out << "ambient " << (amb.cyclic() ? "cyclic" : "full") << "\n";
  out << "pops " << st.pops << "\n";
  out << "found " << st.found.size() << "\n";
  size_t i = 0;
  for (const auto& [key, gens] : st.found) {
    out << "pattern " << i++ << "\n";
    for (const Perm& g : gens) out << "gen " << format_image_list(g) << "\n";
    out << "end\n";
  }
  out << "pending " << st.pending.size() << "\n";
  for (const auto& [wk, gens] : st.pending) {
    out << "item\n";
    for (const Perm& g : gens) out << "gen " << format_image_list(g) << "\n";
    out << "end\n";
  }
  out << "processed " << st.processed.size() << "\n";
  for (const SubKey& k : st.processed)
    out << "key " << k.order << " " << k.hex() << "\n";
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

EnumState read_checkpoint(const Ambient& amb, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path);
  auto bad = [&](const std::string& m) {
    return std::runtime_error(path + ": " + m);
  };
  EnumState st;
  std::string l;
  auto next = [&]() -> std::string {
    while (std::getline(in, l)) {
      if (!l.empty() && l.back() == '\r') l.pop_back();
      if (!l.empty()) return l;
    }
    throw bad("truncated checkpoint");
  };
  if (next() != "ftck 1") throw bad("bad header");
  int d, depth;
  if (sscanf(next().c_str(), "d %d", &d) != 1 || d != amb.d()) throw bad("d mismatch");
  if (sscanf(next().c_str(), "depth %d", &depth) != 1 || depth != amb.depth())
    throw bad("depth mismatch");
  std::string ambline = next();
  if (ambline != std::string("ambient ") + (amb.cyclic() ? "cyclic" : "full"))
    throw bad("ambient mismatch");
  unsigned long long pops;
  if (sscanf(next().c_str(), "pops %llu", &pops) != 1) throw bad("missing pops");
  st.pops = pops;
  unsigned degree = amb.geometry().leaves();

  auto read_gens = [&]() {
    std::vector<Perm> gens;
    while (true) {
      std::string g = next();
      if (g == "end") break;
      if (g.rfind("gen ", 0) != 0) throw bad("expected gen/end");
      std::string err;
      auto p = parse_perm(g.substr(4), degree, &err);
      if (!p) throw bad("bad gen: " + err);
      gens.push_back(*p);
    }
    return gens;
  };

  size_t nfound;
  if (sscanf(next().c_str(), "found %zu", &nfound) != 1) throw bad("missing found");
  for (size_t i = 0; i < nfound; ++i) {
    if (next() != "pattern " + std::to_string(i)) throw bad("bad pattern index");
    std::vector<Perm> gens = read_gens();
    Subgroup s = make_subgroup(amb, perms_to_indices(amb, gens));
    st.found.emplace(s.key, gens_to_perms(amb, s.gens));
  }
  size_t npend;
  if (sscanf(next().c_str(), "pending %zu", &npend) != 1) throw bad("missing pending");
  for (size_t i = 0; i < npend; ++i) {
    if (next() != "item") throw bad("expected item");
    std::vector<Perm> gens = read_gens();
    Subgroup s = make_subgroup(amb, perms_to_indices(amb, gens));
    st.pending.emplace(WorkKey{s.order, s.key}, gens_to_perms(amb, s.gens));
    st.pending_keys.insert(s.key);
  }
  size_t nproc;
  if (sscanf(next().c_str(), "processed %zu", &nproc) != 1) throw bad("missing processed");
  for (size_t i = 0; i < nproc; ++i) {
    std::string kl = next();
    unsigned long long order;
    char hex[40];
    if (sscanf(kl.c_str(), "key %llu %32s", &order, hex) != 2) throw bad("bad key line");
    SubKey k;
    k.order = order;
    if (sscanf(hex, "%16llx%16llx", reinterpret_cast<unsigned long long*>(&k.h1),
               reinterpret_cast<unsigned long long*>(&k.h2)) != 2)
      throw bad("bad key hex");
    st.processed.insert(k);
  }
  return st;
}

EnumerateOutcome run_enumeration(const Ambient& amb, EnumState st,
                                 const EnumerateOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  while (!st.pending.empty()) {
    if (opts.time_budget_seconds > 0) {
      double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (dt > opts.time_budget_seconds) {
        if (opts.checkpoint_path.empty())
          throw std::runtime_error("enumeration time budget exceeded, no checkpoint path");
        write_checkpoint(amb, st, opts.checkpoint_path);
        EnumerateOutcome out;
        out.finished = false;
        out.pops = st.pops;
        return out;
      }
    }

    auto it = st.pending.begin();
    SubKey hkey = it->first.key;
    std::vector<Perm> gens = std::move(it->second);
    st.pending.erase(it);
    st.pending_keys.erase(hkey);
    st.processed.insert(hkey);
    ++st.pops;
    if (opts.progress && opts.progress_every && st.pops % opts.progress_every == 0)
      opts.progress(st.pops, st.found.size(), st.pending.size());

    std::vector<uint32_t> h_elems = amb.close(perms_to_indices(amb, gens));
    std::vector<uint32_t> p_elems = minimal_pattern_of(amb, h_elems);
    Subgroup p = subgroup_from_elems(amb, std::move(p_elems));
    if (st.found.count(p.key)) continue;  // maximal subgroups already queued
    st.found.emplace(p.key, gens_to_perms(amb, p.gens));

    for (Subgroup& m : maximal_subgroups(amb, p, opts.subgroup_opts)) {
      if (subgroup_in_st1(amb, m)) continue;
      if (st.processed.count(m.key) || st.pending_keys.count(m.key)) continue;
      st.pending_keys.insert(m.key);
      st.pending.emplace(WorkKey{m.order, m.key}, gens_to_perms(amb, m.gens));
    }
  }

  EnumerateOutcome out;
  out.pops = st.pops;
  out.db.d = amb.d();
  out.db.depth = amb.depth();
  out.db.cyclic = amb.cyclic();
  for (auto& [key, gens] : st.found) {
    PatternRecord rec;
    rec.gens = std::move(gens);
    rec.order = key.order;
    rec.key = key;
    out.db.patterns.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

EnumerateOutcome enumerate_minimal_patterns(const Ambient& amb,
                                            const EnumerateOptions& opts) {
  EnumState st;
  // the trivial subgroup is a minimal pattern but sits inside St(1), which
  // the worklist prunes; seed it explicitly
  Subgroup trivial = make_subgroup(amb, {});
  st.found.emplace(trivial.key, std::vector<Perm>{});
  Subgroup whole = subgroup_from_elems(amb, amb.all_indices());
  st.pending.emplace(WorkKey{whole.order, whole.key}, gens_to_perms(amb, whole.gens));
  st.pending_keys.insert(whole.key);
  return run_enumeration(amb, std::move(st), opts);
}

EnumerateOutcome resume_enumeration(const Ambient& amb, const std::string& checkpoint_path,
                                    const EnumerateOptions& opts) {
  return run_enumeration(amb, read_checkpoint(amb, checkpoint_path), opts);
}

}  // namespace ftc
