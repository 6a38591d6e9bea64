#include "ftc/subgroups.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace ftc {

namespace {

bool prime_power(uint64_t n, uint64_t& p) {
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

// closure helper over ambient indices with incremental generator additions
struct IndexClosure {
  const Ambient& amb;
  std::vector<bool> in;
  std::vector<uint32_t> elems;
  std::vector<uint32_t> gens;

  explicit IndexClosure(const Ambient& a) : amb(a), in(a.size(), false) {
    in[a.id()] = true;
    elems.push_back(a.id());
  }

  bool contains(uint32_t e) const { return in[e]; }

  void add_gen(uint32_t e) {
    if (in[e]) return;
    gens.push_back(e);
    size_t frontier = elems.size();
    for (size_t i = 0; i < frontier; ++i) {
      uint32_t p = amb.mul(elems[i], e);
      if (!in[p]) {
        in[p] = true;
        elems.push_back(p);
      }
    }
    for (size_t i = frontier; i < elems.size(); ++i)
      for (uint32_t g : gens) {
        uint32_t p = amb.mul(elems[i], g);
        if (!in[p]) {
          in[p] = true;
          elems.push_back(p);
        }
      }
  }
};

std::vector<Subgroup> maximal_of_p_group(const Ambient& amb, const Subgroup& g, uint64_t p) {
  // Frattini subgroup G'G^p, then hyperplanes of the elementary abelian
  // quotient over F_p
  IndexClosure phi(amb);
  for (uint32_t e : derived_subgroup_elems(amb, g.gens))
    phi.add_gen(e);
  for (uint32_t s : g.gens) {
    uint32_t sp = amb.id();
    for (uint64_t k = 0; k < p; ++k) sp = amb.mul(sp, s);
    phi.add_gen(sp);
  }

  // coset labels
  std::unordered_map<uint32_t, uint32_t> coset;  // ambient idx -> coset id
  std::vector<uint32_t> coset_rep;
  for (uint32_t e : g.elems) {
    if (coset.count(e)) continue;
    uint32_t c = static_cast<uint32_t>(coset_rep.size());
    coset_rep.push_back(e);
    for (uint32_t f : phi.elems) coset[amb.mul(e, f)] = c;
  }
  size_t q = coset_rep.size();
  assert(q * phi.elems.size() == g.elems.size());
  if (q == 1) return {};

  // F_p coordinates of each coset from an incremental basis
  std::vector<std::vector<uint8_t>> coord(q);
  std::vector<bool> known(q, false);
  known[coset.at(amb.id())] = true;
  coord[coset.at(amb.id())] = {};
  size_t rank = 0;
  for (uint32_t s : g.gens) {
    uint32_t sc = coset.at(s);
    if (known[sc]) continue;
    ++rank;
    std::vector<std::pair<uint32_t, std::vector<uint8_t>>> base_known;
    for (uint32_t c = 0; c < q; ++c)
      if (known[c]) base_known.emplace_back(c, coord[c]);
    for (auto& [c, v] : base_known) {
      uint32_t cur = coset_rep[c];
      for (uint64_t k = 1; k < p; ++k) {
        cur = amb.mul(cur, s);
        uint32_t cc = coset.at(cur);
        std::vector<uint8_t> w = v;
        w.resize(rank, 0);
        w[rank - 1] = static_cast<uint8_t>(k);
        known[cc] = true;
        coord[cc] = std::move(w);
      }
    }
  }
  for (uint32_t c = 0; c < q; ++c) {
    assert(known[c]);
    coord[c].resize(rank, 0);
  }

  // one functional per hyperplane: first nonzero coefficient normalized to 1
  std::vector<Subgroup> out;
  std::vector<uint8_t> phi_vec(rank, 0);
  while (true) {
    size_t i = 0;
    while (i < rank && phi_vec[i] == static_cast<uint8_t>(p - 1)) phi_vec[i++] = 0;
    if (i == rank) break;
    ++phi_vec[i];
    size_t first = 0;
    while (first < rank && phi_vec[first] == 0) ++first;
    if (first == rank || phi_vec[first] != 1) continue;
    std::vector<uint32_t> elems;
    for (uint32_t e : g.elems) {
      const std::vector<uint8_t>& v = coord[coset.at(e)];
      uint64_t dot = 0;
      for (size_t k = 0; k < rank; ++k) dot += static_cast<uint64_t>(phi_vec[k]) * v[k];
      if (dot % p == 0) elems.push_back(e);
    }
    out.push_back(subgroup_from_elems(amb, std::move(elems)));
  }
  assert(!out.empty());
  return out;
}

}  // namespace

std::vector<uint32_t> derived_subgroup_elems(const Ambient& amb,
                                             const std::vector<uint32_t>& gens) {
  IndexClosure k(amb);
  std::vector<uint32_t> queue;
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = i + 1; j < gens.size(); ++j) {
      uint32_t a = gens[i], b = gens[j];
      uint32_t c = amb.mul(amb.mul(a, b), amb.mul(amb.inv(a), amb.inv(b)));
      queue.push_back(c);
    }
  // normal closure under conjugation by the group generators
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    uint32_t c = queue[qi];
    if (k.contains(c)) continue;
    k.add_gen(c);
    for (uint32_t s : gens) queue.push_back(amb.mul(amb.mul(s, c), amb.inv(s)));
  }
  std::vector<uint32_t> out = k.elems;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Subgroup> subgroup_lattice(const Ambient& amb, const Subgroup& g,
                                       uint64_t bound) {
  if (g.order > bound)
    throw std::length_error("subgroup_lattice: order bound exceeded");
  // local indexing inside g
  const std::vector<uint32_t>& glob = g.elems;
  size_t n = glob.size();
  std::unordered_map<uint32_t, uint16_t> local;
  local.reserve(n * 2);
  for (size_t i = 0; i < n; ++i) local[glob[i]] = static_cast<uint16_t>(i);
  std::vector<uint16_t> linv(n);
  std::vector<uint16_t> mul_table;
  bool use_table = n <= 4096;
  if (use_table) {
    mul_table.resize(n * n);
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b)
        mul_table[a * n + b] = local.at(amb.mul(glob[a], glob[b]));
  }
  auto lmul = [&](uint16_t a, uint16_t b) -> uint16_t {
    if (use_table) return mul_table[static_cast<size_t>(a) * n + b];
    return local.at(amb.mul(glob[a], glob[b]));
  };
  for (size_t i = 0; i < n; ++i) linv[i] = local.at(amb.inv(glob[i]));
  uint16_t lid = local.at(amb.id());

  struct Node {
    std::vector<uint16_t> elems;  // sorted locals
    std::vector<uint16_t> gens;
  };
  std::vector<Node> nodes;
  std::unordered_map<uint64_t, std::vector<uint32_t>> dedup;  // hash -> node ids
  auto local_hash = [](const std::vector<uint16_t>& v) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (uint16_t x : v) h = (h ^ (x + 1u)) * 0x100000001b3ull;
    return h;
  };
  auto add_node = [&](std::vector<uint16_t> elems, std::vector<uint16_t> gens) -> bool {
    std::sort(elems.begin(), elems.end());
    uint64_t h = local_hash(elems);
    auto& bucket = dedup[h];
    for (uint32_t id : bucket)
      if (nodes[id].elems == elems) return false;
    bucket.push_back(static_cast<uint32_t>(nodes.size()));
    nodes.push_back({std::move(elems), std::move(gens)});
    return true;
  };
  add_node({lid}, {});

  std::vector<uint64_t> primes;
  for (uint64_t x = n, c = 2; x > 1; ++c)
    if (x % c == 0) {
      primes.push_back(c);
      while (x % c == 0) x /= c;
    }

  std::vector<bool> member(n);
  for (size_t ni = 0; ni < nodes.size(); ++ni) {
    // copy: nodes reallocation invalidates references
    std::vector<uint16_t> helems = nodes[ni].elems;
    std::vector<uint16_t> hgens = nodes[ni].gens;
    if (helems.size() == n) continue;
    std::fill(member.begin(), member.end(), false);
    for (uint16_t e : helems) member[e] = true;
    for (uint16_t z = 0; z < n; ++z) {
      if (member[z]) continue;
      // z must normalize H
      uint16_t zi = linv[z];
      bool normalizes = true;
      for (uint16_t hgen : hgens)
        if (!member[lmul(lmul(z, hgen), zi)]) {
          normalizes = false;
          break;
        }
      if (!normalizes) continue;
      // prime order of zH in N(H)/H
      uint16_t zp = z;
      uint64_t m = 1;
      while (!member[zp]) {
        zp = lmul(zp, z);
        ++m;
      }
      if (std::find(primes.begin(), primes.end(), m) == primes.end()) continue;
      std::vector<uint16_t> ext;
      ext.reserve(helems.size() * m);
      uint16_t zk = lid;
      for (uint64_t k = 0; k < m; ++k) {
        for (uint16_t e : helems) ext.push_back(lmul(e, zk));
        zk = lmul(zk, z);
      }
      std::vector<uint16_t> egens = hgens;
      egens.push_back(z);
      add_node(std::move(ext), std::move(egens));
    }
  }

  std::vector<Subgroup> out;
  out.reserve(nodes.size());
  for (const Node& nd : nodes) {
    std::vector<uint32_t> elems;
    elems.reserve(nd.elems.size());
    for (uint16_t e : nd.elems) elems.push_back(glob[e]);
    std::sort(elems.begin(), elems.end());
    out.push_back(subgroup_from_elems(amb, std::move(elems)));
  }
  return out;
}

std::vector<Subgroup> maximal_subgroups(const Ambient& amb, const Subgroup& g,
                                        const SubgroupOptions& opts) {
  if (g.order == 1) return {};
  uint64_t p = 0;
  if (prime_power(g.order, p)) {
    if (g.order > opts.p_group_bound)
      throw std::length_error("maximal_subgroups: p-group order bound exceeded");
    return maximal_of_p_group(amb, g, p);
  }
  std::vector<Subgroup> lattice = subgroup_lattice(amb, g, opts.lattice_bound);
  // keep inclusion-maximal proper members
  std::sort(lattice.begin(), lattice.end(),
            [](const Subgroup& a, const Subgroup& b) { return a.order > b.order; });
  std::vector<Subgroup> out;
  size_t words = (amb.size() + 63) / 64;
  auto bits_of = [&](const Subgroup& s) {
    std::vector<uint64_t> b(words, 0);
    for (uint32_t e : s.elems) b[e >> 6] |= 1ull << (e & 63);
    return b;
  };
  std::vector<std::vector<uint64_t>> out_bits;
  for (const Subgroup& s : lattice) {
    if (s.order == g.order) continue;
    std::vector<uint64_t> sb = bits_of(s);
    bool covered = false;
    for (size_t i = 0; i < out.size() && !covered; ++i) {
      if (out[i].order <= s.order || out[i].order % s.order) continue;
      covered = true;
      for (size_t w = 0; w < words; ++w)
        if (sb[w] & ~out_bits[i][w]) {
          covered = false;
          break;
        }
    }
    if (!covered) {
      out.push_back(s);
      out_bits.push_back(std::move(sb));
    }
  }
  return out;
}

// ---------------------------------------------------------------- small_iso

namespace {

struct SmallGroup {
  std::vector<Perm> elems;  // sorted
  std::unordered_map<Perm, uint16_t, PermHash> index;
  std::vector<uint16_t> inv;
  std::vector<uint64_t> eorder;
  std::vector<uint32_t> class_size;  // per element, size of its conjugacy class

  explicit SmallGroup(std::vector<Perm> es) : elems(std::move(es)) {
    std::sort(elems.begin(), elems.end());
    for (size_t i = 0; i < elems.size(); ++i)
      index[elems[i]] = static_cast<uint16_t>(i);
    inv.resize(elems.size());
    eorder.resize(elems.size());
    class_size.assign(elems.size(), 0);
    for (size_t i = 0; i < elems.size(); ++i) {
      inv[i] = index.at(elems[i].inverse());
      eorder[i] = elems[i].order();
    }
    std::vector<bool> seen(elems.size(), false);
    for (size_t i = 0; i < elems.size(); ++i) {
      if (seen[i]) continue;
      std::vector<uint16_t> cls;
      for (size_t j = 0; j < elems.size(); ++j) {
        Perm c = elems[j] * elems[i] * elems[j].inverse();
        uint16_t ci = index.at(c);
        if (!seen[ci]) {
          seen[ci] = true;
          cls.push_back(ci);
        }
      }
      for (uint16_t ci : cls) class_size[ci] = static_cast<uint32_t>(cls.size());
    }
  }

  uint16_t mul(uint16_t a, uint16_t b) const { return index.at(elems[a] * elems[b]); }
  uint16_t id() const { return index.at(Perm(elems[0].degree())); }

  std::vector<uint16_t> minimal_gens() const {
    std::vector<uint16_t> gens;
    std::vector<bool> in(elems.size(), false);
    std::vector<uint16_t> cur{id()};
    in[id()] = true;
    // largest element order first keeps the generating set short
    std::vector<uint16_t> order_idx(elems.size());
    for (size_t i = 0; i < elems.size(); ++i) order_idx[i] = static_cast<uint16_t>(i);
    std::stable_sort(order_idx.begin(), order_idx.end(),
                     [&](uint16_t a, uint16_t b) { return eorder[a] > eorder[b]; });
    for (uint16_t e : order_idx) {
      if (in[e]) continue;
      gens.push_back(e);
      size_t frontier = cur.size();
      for (size_t i = 0; i < frontier; ++i) {
        uint16_t p = mul(cur[i], e);
        if (!in[p]) {
          in[p] = true;
          cur.push_back(p);
        }
      }
      for (size_t i = frontier; i < cur.size(); ++i)
        for (uint16_t g : gens) {
          uint16_t p = mul(cur[i], g);
          if (!in[p]) {
            in[p] = true;
            cur.push_back(p);
          }
        }
      if (cur.size() == elems.size()) break;
    }
    return gens;
  }
};

std::vector<std::pair<uint64_t, uint32_t>> order_class_fingerprint(const SmallGroup& g) {
  std::vector<std::pair<uint64_t, uint32_t>> fp;
  fp.reserve(g.elems.size());
  for (size_t i = 0; i < g.elems.size(); ++i)
    fp.emplace_back(g.eorder[i], g.class_size[i]);
  std::sort(fp.begin(), fp.end());
  return fp;
}

std::vector<uint64_t> derived_series_orders(const std::vector<Perm>& elems) {
  std::vector<uint64_t> out;
  std::vector<Perm> cur = elems;
  out.push_back(cur.size());
  while (cur.size() > 1) {
    // derived subgroup by brute closure of commutators
    std::unordered_set<Perm, PermHash> comm;
    for (const Perm& a : cur)
      for (const Perm& b : cur)
        comm.insert(a * b * a.inverse() * b.inverse());
    std::vector<Perm> gens(comm.begin(), comm.end());
    std::unordered_set<Perm, PermHash> clo;
    std::vector<Perm> queue{Perm(elems[0].degree())};
    clo.insert(queue[0]);
    while (!queue.empty()) {
      Perm e = std::move(queue.back());
      queue.pop_back();
      for (const Perm& g : gens) {
        Perm p = g * e;
        if (clo.insert(p).second) queue.push_back(p);
      }
    }
    if (clo.size() == cur.size()) {  // perfect group, series stabilized
      out.push_back(clo.size());
      break;
    }
    cur.assign(clo.begin(), clo.end());
    out.push_back(cur.size());
  }
  return out;
}

bool try_map(const SmallGroup& g, const SmallGroup& h, const std::vector<uint16_t>& ggens,
             const std::vector<uint16_t>& himgs) {
  size_t n = g.elems.size();
  std::vector<int32_t> map(n, -1);
  map[g.id()] = h.id();
  std::vector<uint16_t> queue{g.id()};
  std::vector<bool> queued(n, false);
  queued[g.id()] = true;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    uint16_t a = queue[qi];
    for (size_t s = 0; s < ggens.size(); ++s) {
      uint16_t as = g.mul(a, ggens[s]);
      uint16_t bs = h.mul(static_cast<uint16_t>(map[a]), himgs[s]);
      if (map[as] < 0) {
        map[as] = bs;
        if (!queued[as]) {
          queued[as] = true;
          queue.push_back(as);
        }
      } else if (map[as] != bs) {
        return false;
      }
    }
  }
  if (queue.size() != n) return false;  // gens do not generate g
  std::vector<bool> hit(n, false);
  for (size_t i = 0; i < n; ++i) {
    if (map[i] < 0 || hit[map[i]]) return false;
    hit[map[i]] = true;
  }
  return true;
}

}  // namespace

bool small_iso(const std::vector<Perm>& ge, const std::vector<Perm>& he, uint64_t bound) {
  if (ge.size() != he.size()) return false;
  if (ge.size() > bound) throw std::length_error("small_iso: order bound exceeded");
  if (ge.size() == 1) return true;
  SmallGroup g(ge), h(he);
  if (order_class_fingerprint(g) != order_class_fingerprint(h)) return false;
  if (derived_series_orders(g.elems) != derived_series_orders(h.elems)) return false;

  std::vector<uint16_t> ggens = g.minimal_gens();
  // candidate images per generator: matching element order and class size
  std::vector<std::vector<uint16_t>> cands(ggens.size());
  for (size_t s = 0; s < ggens.size(); ++s)
    for (size_t j = 0; j < h.elems.size(); ++j)
      if (h.eorder[j] == g.eorder[ggens[s]] && h.class_size[j] == g.class_size[ggens[s]])
        cands[s].push_back(static_cast<uint16_t>(j));

  std::vector<uint16_t> pick(ggens.size());
  std::vector<size_t> pos(ggens.size(), 0);
  size_t depth2 = 0;
  while (true) {
    if (pos[depth2] == cands[depth2].size()) {
      if (depth2 == 0) return false;
      pos[depth2] = 0;
      --depth2;
      ++pos[depth2];
      continue;
    }
    pick[depth2] = cands[depth2][pos[depth2]];
    if (depth2 + 1 < ggens.size()) {
      ++depth2;
      continue;
    }
    if (try_map(g, h, ggens, pick)) return true;
    ++pos[depth2];
  }
}

std::string small_group_name(const std::vector<Perm>& elems) {
  size_t n = elems.size();
  if (n == 1) return "1";
  SmallGroup g(elems);
  bool abelian = true;
  for (size_t i = 0; i < n && abelian; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (g.mul(static_cast<uint16_t>(i), static_cast<uint16_t>(j)) !=
          g.mul(static_cast<uint16_t>(j), static_cast<uint16_t>(i))) {
        abelian = false;
        break;
      }
  if (abelian) {
    // primary decomposition from element-order counts: for each prime p the
    // count N_k = #{x : x^{p^k} = 1} equals p^{sum_i min(k, lambda_i)}, so
    // e_k - e_{k-1} with e_k = log_p N_k counts the parts of size >= p^k
    std::vector<std::vector<uint64_t>> primary;  // per prime, parts descending
    uint64_t m = n;
    for (uint64_t p = 2; p <= m; ++p) {
      if (m % p) continue;
      std::vector<uint64_t> parts;
      size_t p_total = 0;  // elements of p-power order, including 1
      for (size_t i = 0; i < n; ++i) {
        uint64_t o = g.eorder[i];
        while (o % p == 0) o /= p;
        if (o == 1) ++p_total;
      }
      std::vector<int> e{0};
      for (uint64_t pk = p;; pk *= p) {
        size_t c = 0;
        for (size_t i = 0; i < n; ++i)
          if (pk % g.eorder[i] == 0) ++c;
        int lg = 0;
        for (size_t v = c; v > 1; v /= p) ++lg;
        e.push_back(lg);
        if (c == p_total) break;
      }
      for (size_t k = 1; k < e.size(); ++k) {
        int geq_k = e[k] - e[k - 1];
        int geq_k1 = k + 1 < e.size() ? e[k + 1] - e[k] : 0;
        uint64_t pk = 1;
        for (size_t t = 0; t < k; ++t) pk *= p;
        for (int t = 0; t < geq_k - geq_k1; ++t) parts.push_back(pk);
      }
      std::sort(parts.rbegin(), parts.rend());
      primary.push_back(std::move(parts));
      while (m % p == 0) m /= p;
    }
    // invariant factors: product of the k-th largest primary parts
    std::vector<uint64_t> factors;
    for (size_t k = 0;; ++k) {
      uint64_t f = 1;
      for (const auto& parts : primary)
        if (k < parts.size()) f *= parts[k];
      if (f == 1) break;
      factors.push_back(f);
    }
    std::sort(factors.begin(), factors.end());
    std::string name;
    for (uint64_t q : factors) {
      if (!name.empty()) name += "x";
      name += "C" + std::to_string(q);
    }
    return name;
  }
  if (n == 6) return "S3";
  if (n == 8) {
    size_t invol = 0;
    for (size_t i = 0; i < n; ++i)
      if (g.eorder[i] == 2) ++invol;
    return invol == 5 ? "D4" : "Q8";
  }
  // generic label with a fingerprint hash
  auto fp = order_class_fingerprint(g);
  uint64_t h = 0xcbf29ce484222325ull;
  for (auto& [o, c] : fp) h = (h ^ (o * 131 + c)) * 0x100000001b3ull;
  for (uint64_t d : derived_series_orders(g.elems)) h = (h ^ d) * 0x100000001b3ull;
  char buf[32];
  snprintf(buf, sizeof buf, "G%zu#%04llx", n, static_cast<unsigned long long>(h & 0xffff));
  return buf;
}

}  // namespace ftc
