#include "ftc/perm_group.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>

namespace ftc {

unsigned min_moved_point(const Perm& p) {
  for (unsigned i = 0; i < p.degree(); ++i)
    if (p[i] != i) return i;
  return p.degree();
}

PermGroup::PermGroup(unsigned degree, const std::vector<Perm>& gens)
    : degree_(degree), order_(1) {
  gens_ = gens;
  for (const Perm& g : gens) {
    assert(g.degree() == degree_);
    if (!g.is_identity()) add_pool(g);
  }
  complete(nullptr);
  recompute_order();
}

PermGroup::PermGroup(unsigned degree, const std::vector<Perm>& gens,
                     const BigUint& known_order)
    : degree_(degree), order_(1) {
  gens_ = gens;
  for (const Perm& g : gens) {
    assert(g.degree() == degree_);
    if (!g.is_identity()) add_pool(g);
  }
  complete(&known_order);
  recompute_order();
  if (!(order_ == known_order))
    throw std::logic_error("PermGroup: generators do not reach the stated order (got " +
                           order_.str() + ", expected " + known_order.str() + ")");
}

size_t PermGroup::level_index_for(unsigned beta) const {
  size_t lo = 0, hi = levels_.size();
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (levels_[mid].beta < beta)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

void PermGroup::add_pool(const Perm& g) {
  pool_.push_back(g);
  pool_inv_.push_back(g.inverse());
  pool_home_.push_back(min_moved_point(g));
}

void PermGroup::rebuild_level(size_t li) {
  Level& lv = levels_[li];
  lv.dirty = false;
  lv.orbit.clear();
  lv.pos.assign(degree_, -1);
  lv.via.clear();
  lv.prev.clear();
  lv.orbit.push_back(lv.beta);
  lv.pos[lv.beta] = 0;
  lv.via.push_back(-1);
  lv.prev.push_back(lv.beta);
  for (size_t qi = 0; qi < lv.orbit.size(); ++qi) {
    unsigned p = lv.orbit[qi];
    for (size_t gi = 0; gi < pool_.size(); ++gi) {
      if (pool_home_[gi] < lv.beta) continue;
      unsigned q = pool_[gi][p];
      if (lv.pos[q] < 0) {
        lv.pos[q] = static_cast<int32_t>(lv.orbit.size());
        lv.orbit.push_back(q);
        lv.via.push_back(static_cast<int32_t>(gi));
        lv.prev.push_back(p);
      }
    }
  }
}

void PermGroup::divide(Perm& h, size_t li, unsigned p) const {
  // walk the Schreier tree back to beta, dividing by edge generators
  const Level& lv = levels_[li];
  while (p != lv.beta) {
    int32_t qp = lv.pos[p];
    assert(qp >= 0);
    h = pool_inv_[lv.via[qp]] * h;
    p = h[lv.beta];
  }
}

Perm PermGroup::transversal(size_t li, unsigned p) const {
  // u_p = s_k * ... * s_1 along the Schreier tree path from beta to p
  const Level& lv = levels_[li];
  Perm u(degree_);
  while (p != lv.beta) {
    int32_t qp = lv.pos[p];
    u = u * pool_[lv.via[qp]];
    p = lv.prev[qp];
  }
  return u;
}

unsigned PermGroup::sift(Perm& h, unsigned from_point) const {
  for (size_t li = level_index_for(from_point); li < levels_.size(); ++li) {
    unsigned m = min_moved_point(h);
    if (m == degree_) return degree_;
    if (m < levels_[li].beta) return m;  // moves a point with trivial orbit
    unsigned p = h[levels_[li].beta];
    if (p == levels_[li].beta) continue;
    if (levels_[li].pos[p] < 0) return min_moved_point(h);
    divide(h, li, p);
  }
  return min_moved_point(h);
}

BigUint PermGroup::chain_product() const {
  BigUint prod(1);
  for (const Level& lv : levels_) prod *= BigUint(lv.orbit.size());
  return prod;
}

void PermGroup::complete(const BigUint* known_order) {
  if (pool_.empty()) return;
  for (size_t gi = 0; gi < pool_.size(); ++gi) {
    size_t li = level_index_for(pool_home_[gi]);
    if (li == levels_.size() || levels_[li].beta != pool_home_[gi]) {
      Level lv;
      lv.beta = pool_home_[gi];
      levels_.insert(levels_.begin() + static_cast<long>(li), std::move(lv));
    }
  }
  auto refresh = [&] {
    for (size_t k = 0; k < levels_.size(); ++k)
      if (levels_[k].dirty) rebuild_level(k);
  };
  refresh();
  if (known_order && chain_product() == *known_order) return;

  // bottom-up verification; a residue stuck at a deeper point restarts the
  // sweep from its level (every Schreier generator of level li already fixes
  // all points <= beta_li, so the stuck point is strictly below)
  size_t li = levels_.size();
  while (li-- > 0) {
    if (levels_[li].dirty) rebuild_level(li);
    bool restart = false;
    for (size_t qi = 0; qi < levels_[li].orbit.size() && !restart; ++qi) {
      unsigned p = levels_[li].orbit[qi];
      Perm u_p = transversal(li, p);
      unsigned beta = levels_[li].beta;
      for (size_t gi = 0; gi < pool_.size() && !restart; ++gi) {
        if (pool_home_[gi] < beta) continue;
        unsigned q = pool_[gi][p];
        {
          const Level& lv = levels_[li];
          int32_t qpos = lv.pos[q];
          if (qpos >= 0 && lv.prev[qpos] == p && lv.via[qpos] == static_cast<int32_t>(gi))
            continue;  // tree edge, Schreier generator is trivial
        }
        Perm g = pool_[gi] * u_p;
        divide(g, li, q);
        if (g.is_identity()) continue;
        unsigned stuck = sift(g, beta + 1);
        if (stuck == degree_) continue;
        size_t ni = level_index_for(stuck);
        if (ni == levels_.size() || levels_[ni].beta != stuck) {
          Level nl;
          nl.beta = stuck;
          levels_.insert(levels_.begin() + static_cast<long>(ni), std::move(nl));
        }
        add_pool(g);
        for (size_t k = 0; k <= ni; ++k)
          if (levels_[k].beta <= stuck) levels_[k].dirty = true;
        if (known_order) {
          refresh();
          if (chain_product() == *known_order) return;
        }
        li = ni + 1;  // loop decrement lands on the new level
        restart = true;
      }
    }
  }
}

void PermGroup::recompute_order() {
  order_ = BigUint(1);
  for (const Level& lv : levels_) order_ *= BigUint(lv.orbit.size());
}

bool PermGroup::contains(const Perm& g) const {
  assert(g.degree() == degree_);
  if (g.is_identity()) return true;
  Perm h = g;
  return sift(h, 0) == degree_;
}

bool PermGroup::contains_group(const PermGroup& h) const {
  for (const Perm& g : h.gens_)
    if (!contains(g)) return false;
  return true;
}

PermGroup PermGroup::prefix_stabilizer(unsigned t) const {
  BigUint expected(1);
  for (const Level& lv : levels_)
    if (lv.beta >= t) expected *= BigUint(lv.orbit.size());
  return PermGroup(degree_, prefix_stabilizer_gens(t), expected);
}

std::vector<Perm> PermGroup::prefix_stabilizer_gens(unsigned t) const {
  // pool entries with home >= t form a strong generating set of the
  // pointwise stabilizer of {0..t-1}
  std::vector<Perm> out;
  for (size_t gi = 0; gi < pool_.size(); ++gi)
    if (pool_home_[gi] >= t) out.push_back(pool_[gi]);
  return reduce_generators(degree_, out);
}

std::vector<Perm> PermGroup::elements(uint64_t bound) const {
  if (BigUint(bound) < order_)
    throw std::length_error("PermGroup::elements: order exceeds bound " + order_.str());
  std::vector<Perm> cur{Perm(degree_)};
  for (size_t li = levels_.size(); li-- > 0;) {
    const Level& lv = levels_[li];
    if (lv.orbit.size() == 1) continue;
    std::vector<Perm> trans;
    trans.reserve(lv.orbit.size());
    for (unsigned p : lv.orbit) trans.push_back(transversal(li, p));
    std::vector<Perm> next;
    next.reserve(cur.size() * trans.size());
    for (const Perm& u : trans)
      for (const Perm& e : cur) next.push_back(u * e);
    cur = std::move(next);
  }
  return cur;
}

bool PermGroup::is_transitive_on(unsigned lo, unsigned hi) const {
  std::vector<bool> seen(degree_, false);
  std::deque<unsigned> queue{lo};
  seen[lo] = true;
  unsigned count = 1;
  while (!queue.empty()) {
    unsigned p = queue.front();
    queue.pop_front();
    for (const Perm& g : gens_) {
      unsigned q = g[p];
      if (!seen[q]) {
        seen[q] = true;
        ++count;
        queue.push_back(q);
      }
    }
  }
  for (unsigned p = lo; p < hi; ++p)
    if (!seen[p]) return false;
  return count == hi - lo;
}

bool PermGroup::is_abelian() const {
  for (size_t i = 0; i < gens_.size(); ++i)
    for (size_t j = i + 1; j < gens_.size(); ++j)
      if (!(gens_[i] * gens_[j] == gens_[j] * gens_[i])) return false;
  return true;
}

std::vector<Perm> PermGroup::reduce_generators(unsigned degree,
                                               const std::vector<Perm>& gens) {
  std::vector<Perm> kept;
  PermGroup acc(degree, {});
  for (const Perm& g : gens) {
    if (g.is_identity() || acc.contains(g)) continue;
    kept.push_back(g);
    acc = PermGroup(degree, kept);
  }
  return kept;
}

GroupBuilder::GroupBuilder(unsigned degree) : pg_(degree) {}

bool GroupBuilder::add(const Perm& g) {
  if (g.is_identity()) return false;
  Perm h = g;
  unsigned stuck = pg_.sift(h, 0);
  if (stuck == pg_.degree_) return false;
  size_t ni = pg_.level_index_for(stuck);
  if (ni == pg_.levels_.size() || pg_.levels_[ni].beta != stuck) {
    PermGroup::Level nl;
    nl.beta = stuck;
    pg_.levels_.insert(pg_.levels_.begin() + static_cast<long>(ni), std::move(nl));
  }
  pg_.add_pool(h);
  for (size_t k = 0; k < pg_.levels_.size() && pg_.levels_[k].beta <= stuck; ++k)
    pg_.rebuild_level(k);
  return true;
}

bool GroupBuilder::sift_member(const Perm& g) const {
  if (g.is_identity()) return true;
  Perm h = g;
  return pg_.sift(h, 0) == pg_.degree_;
}

const std::vector<Perm>& GroupBuilder::pool() const { return pg_.pool_; }

PermGroup GroupBuilder::verify() const { return PermGroup(pg_.degree_, pg_.pool_); }

GroupBuilder normal_closure_builder(const PermGroup& g, const std::vector<Perm>& seed) {
  GroupBuilder b(g.degree());
  std::deque<Perm> queue(seed.begin(), seed.end());
  while (!queue.empty()) {
    Perm c = std::move(queue.front());
    queue.pop_front();
    if (!b.add(c)) continue;
    for (const Perm& s : g.generators()) queue.push_back(s * c * s.inverse());
  }
  return b;
}

GroupBuilder derived_builder(const PermGroup& g) {
  const std::vector<Perm>& s = g.generators();
  std::vector<Perm> comms;
  for (size_t i = 0; i < s.size(); ++i)
    for (size_t j = i + 1; j < s.size(); ++j)
      comms.push_back(s[i] * s[j] * s[i].inverse() * s[j].inverse());
  return normal_closure_builder(g, comms);
}

PermGroup normal_closure(const PermGroup& g, std::vector<Perm> seed) {
  return normal_closure_builder(g, seed).verify();
}

PermGroup derived_subgroup(const PermGroup& g) { return derived_builder(g).verify(); }

}  // namespace ftc
