#include "ftc/mealy.hpp"

#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ftc {

MealyAutomaton::MealyAutomaton(int d, std::vector<MealyState> states)
    : d_(d), states_(std::move(states)) {
  if (d < 2) throw std::invalid_argument("alphabet too small");
  for (const MealyState& s : states_) {
    if (s.out.degree() != static_cast<unsigned>(d))
      throw std::invalid_argument("state " + s.name + ": output is not a permutation of the alphabet");
    if (s.to.size() != static_cast<size_t>(d))
      throw std::invalid_argument("state " + s.name + ": missing transitions");
    for (int t : s.to)
      if (t < 0 || t >= static_cast<int>(states_.size()))
        throw std::invalid_argument("state " + s.name + ": transition target missing");
  }
}

int MealyAutomaton::state_index(const std::string& name) const {
  for (size_t i = 0; i < states_.size(); ++i)
    if (states_[i].name == name) return static_cast<int>(i);
  return -1;
}

int MealyAutomaton::walk(int q, int level, uint32_t v) const {
  for (int i = level - 1; i >= 0; --i) {
    uint32_t x = v;
    for (int j = 0; j < i; ++j) x /= static_cast<uint32_t>(d_);
    q = states_[q].to[x % d_];
  }
  return q;
}

TreeAut MealyAutomaton::expand(int q, int n) const {
  TreeGeometry geo(d_, n);
  std::vector<Perm> labels(geo.internal_count());
  std::vector<int> cur{q};
  for (int k = 0; k < n; ++k) {
    std::vector<int> next(cur.size() * d_);
    for (uint32_t v = 0; v < geo.level_size[k]; ++v) {
      labels[geo.internal_index(k, v)] = states_[cur[v]].out;
      for (int x = 0; x < d_; ++x) next[v * d_ + x] = states_[cur[v]].to[x];
    }
    cur = std::move(next);
  }
  return TreeAut(geo, std::move(labels));
}

std::vector<Perm> MealyAutomaton::truncated_gens(int n) const {
  std::vector<Perm> out;
  out.reserve(states_.size());
  for (size_t q = 0; q < states_.size(); ++q)
    out.push_back(expand(static_cast<int>(q), n).to_leaf_perm());
  return out;
}

// --------------------------------------------------------------- file format

MealyAutomaton parse_mealy(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next = [&](std::string& out_line) -> bool {
    while (std::getline(in, line)) {
      size_t h = line.find('#');
      if (h != std::string::npos) line.resize(h);
      size_t b = line.find_last_not_of(" \t\r");
      if (b == std::string::npos) continue;
      line.resize(b + 1);
      size_t a = line.find_first_not_of(" \t");
      out_line = line.substr(a);
      return true;
    }
    return false;
  };
  auto bad = [](const std::string& m) { return std::runtime_error("mealy: " + m); };

  std::string l;
  if (!next(l) || l != "mealy 1") throw bad("missing mealy 1 header");
  int d = 0;
  if (!next(l) || sscanf(l.c_str(), "alphabet %d", &d) != 1 || d < 2)
    throw bad("missing alphabet line");

  struct RawState {
    std::string name;
    std::vector<int> out, to_raw;  // -1 marks unset
    std::vector<std::string> to_name;
  };
  std::vector<RawState> raw;
  while (next(l)) {
    if (l.rfind("state ", 0) == 0) {
      RawState s;
      s.name = l.substr(6);
      if (s.name.empty()) throw bad("state without a name");
      s.out.assign(d, -1);
      s.to_name.assign(d, "");
      raw.push_back(std::move(s));
      continue;
    }
    if (raw.empty()) throw bad("transition before any state");
    RawState& s = raw.back();
    char shift[16], target[128];
    int xin, xout;
    if (sscanf(l.c_str(), "on * out %15s to %127s", shift, target) == 2) {
      int delta;
      if (std::string(shift) == "=")
        delta = 0;
      else if (std::string(shift) == "+1")
        delta = 1;
      else if (std::string(shift) == "-1")
        delta = d - 1;
      else
        throw bad("unknown output shorthand " + std::string(shift));
      for (int x = 0; x < d; ++x) {
        if (s.out[x] >= 0) throw bad("duplicate transition in state " + s.name);
        s.out[x] = (x + delta) % d;
        s.to_name[x] = target;
      }
      continue;
    }
    if (sscanf(l.c_str(), "on %d out %d to %127s", &xin, &xout, target) == 3) {
      if (xin < 1 || xin > d || xout < 1 || xout > d) throw bad("letter out of range");
      if (s.out[xin - 1] >= 0) throw bad("duplicate transition in state " + s.name);
      s.out[xin - 1] = xout - 1;
      s.to_name[xin - 1] = target;
      continue;
    }
    throw bad("unrecognized line: " + l);
  }

  std::vector<MealyState> states;
  auto index_of = [&](const std::string& n) {
    for (size_t i = 0; i < raw.size(); ++i)
      if (raw[i].name == n) return static_cast<int>(i);
    throw bad("unknown state " + n);
  };
  for (RawState& s : raw) {
    MealyState st;
    st.name = s.name;
    std::vector<uint16_t> img(d);
    std::vector<bool> hit(d, false);
    for (int x = 0; x < d; ++x) {
      if (s.out[x] < 0) throw bad("state " + s.name + " missing letter " + std::to_string(x + 1));
      img[x] = static_cast<uint16_t>(s.out[x]);
      if (hit[s.out[x]]) throw bad("state " + s.name + " output is not a permutation");
      hit[s.out[x]] = true;
      st.to.push_back(index_of(s.to_name[x]));
    }
    st.out = Perm(std::move(img));
    states.push_back(std::move(st));
  }
  return MealyAutomaton(d, std::move(states));
}

MealyAutomaton load_mealy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mealy(ss.str());
}

std::string format_mealy(const MealyAutomaton& a) {
  std::string out = "mealy 1\nalphabet " + std::to_string(a.d()) + "\n";
  for (size_t q = 0; q < a.state_count(); ++q) {
    const MealyState& s = a.state(q);
    out += "state " + s.name + "\n";
    for (int x = 0; x < a.d(); ++x)
      out += "on " + std::to_string(x + 1) + " out " + std::to_string(s.out[x] + 1) +
             " to " + a.state(s.to[x]).name + "\n";
  }
  return out;
}

// -------------------------------------------------------------------- words

GroupWord parse_word(const std::string& text) {
  GroupWord w;
  std::string t;
  for (char c : text) t += (c == '*' ? ' ' : c);
  std::istringstream in(t);
  std::string tok;
  while (in >> tok) {
    size_t caret = tok.find('^');
    std::string name = tok.substr(0, caret == std::string::npos ? tok.size() : caret);
    int exp = 1;
    if (caret != std::string::npos) exp = std::stoi(tok.substr(caret + 1));
    if (name.empty()) throw std::runtime_error("empty factor in word");
    w.factors.emplace_back(name, exp);
  }
  return w;
}

TreeAut evaluate_word(const MealyAutomaton& a, const GroupWord& w, int n) {
  // factors apply left to right: the first factor acts first
  TreeGeometry geo(a.d(), n);
  TreeAut acc = TreeAut::identity(geo);
  for (const auto& [name, exp] : w.factors) {
    int q = a.state_index(name);
    if (q < 0) throw std::runtime_error("word uses unknown state " + name);
    TreeAut base = a.expand(q, n);
    if (exp < 0) base = base.inverse();
    for (int i = 0; i < std::abs(exp); ++i) acc = compose(base, acc);
  }
  return acc;
}

ProbeReport word_section_probe(const MealyAutomaton& a, const GroupWord& w,
                               uint64_t k_max, int n_max) {
  ProbeReport rep;
  if (n_max <= 0) n_max = a.d() == 2 ? 8 : 5;
  rep.n_max = n_max;
  rep.k_max = k_max;
  TreeGeometry geo(a.d(), n_max);
  TreeAut g = evaluate_word(a, w, n_max);
  Perm gl = g.to_leaf_perm();
  rep.truncation_order = gl.order();
  rep.order_within_k = rep.truncation_order <= k_max;
  rep.inconclusive = !rep.order_within_k;

  Perm h = gl;
  for (uint64_t m = 2; m <= k_max; ++m) {
    h = h * gl;  // g^m
    if (h.is_identity()) break;
    if (std::gcd(m, rep.truncation_order) == 1) continue;
    auto ha = tree_aut_from_leaf_perm(geo, h);
    // deepest level fixed pointwise
    int fixed = 0;
    for (int k = 1; k <= n_max; ++k) {
      bool all = true;
      for (uint32_t v = 0; v < geo.level_size[k] && all; ++v)
        all = ha->apply(k, v) == v;
      if (!all) break;
      fixed = k;
    }
    for (int lvl = 1; lvl <= fixed && !rep.infinite; ++lvl)
      for (uint32_t v = 0; v < geo.level_size[lvl] && !rep.infinite; ++v)
        if (section(*ha, lvl, v, n_max - lvl) == project(g, n_max - lvl))
          rep.infinite = ProbeWitness{m, lvl, v};
    if (rep.infinite) {
      rep.inconclusive = false;
      break;
    }
  }
  return rep;
}

ClosureVerdict closure_check(const MealyAutomaton& a, PatternAnalysis& pa) {
  ClosureVerdict v;
  if (a.d() != pa.d()) throw std::invalid_argument("alphabet does not match the tree arity");
  int D = pa.depth();
  std::vector<Perm> gens = a.truncated_gens(D);
  bool contained = true;
  for (const Perm& g : gens)
    if (!pa.contains(g)) {
      contained = false;
      break;
    }
  if (contained) {
    PermGroup tg(pa.geometry().leaves(), gens);
    v.truncation_matches = tg.order() == BigUint(pa.order());
  }
  if (!v.truncation_matches) {
    v.detail = "truncation differs from the pattern";
    return v;
  }
  v.p_group = pa.is_p_group();
  if (!v.p_group) {
    v.detail = "pattern is not a p-group";
    return v;
  }
  v.tfg = pa.tfg_status().kind == TfgStatus::TFG;
  if (!v.tfg) {
    v.detail = "group of finite type not certified tfg";
    return v;
  }
  v.detail = "closure equals the group of finite type";
  return v;
}

}  // namespace ftc
