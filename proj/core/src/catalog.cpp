#include <map>
#include <sstream>
#include <stdexcept>

#include "ftc/mealy.hpp"

namespace ftc {

namespace {

// compact state spec: "name: 2 a, 1 c" lists output>target per input letter;
// "name: = q" copies the input, "name: + q" shifts by one, "name: - q" by
// minus one, always moving to q
MealyAutomaton build(int d, const std::vector<std::string>& specs) {
  std::vector<std::string> names;
  for (const std::string& s : specs) names.push_back(s.substr(0, s.find(':')));
  auto index_of = [&](const std::string& n) {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<int>(i);
    throw std::logic_error("catalog: unknown state " + n);
  };
  std::vector<MealyState> states;
  for (const std::string& s : specs) {
    size_t colon = s.find(':');
    MealyState st;
    st.name = s.substr(0, colon);
    std::string body = s.substr(colon + 1);
    std::vector<uint16_t> img(d);
    st.to.assign(d, 0);
    std::istringstream in(body);
    std::string first;
    in >> first;
    if (first == "=" || first == "+" || first == "-") {
      std::string target;
      in >> target;
      int delta = first == "=" ? 0 : (first == "+" ? 1 : d - 1);
      for (int x = 0; x < d; ++x) {
        img[x] = static_cast<uint16_t>((x + delta) % d);
        st.to[x] = index_of(target);
      }
    } else {
      in.seekg(0);
      std::string chunk;
      int x = 0;
      std::string rest;
      std::getline(in, rest);
      std::istringstream parts(rest);
      while (std::getline(parts, chunk, ',')) {
        std::istringstream pc(chunk);
        int out;
        std::string target;
        if (!(pc >> out >> target) || x >= d)
          throw std::logic_error("catalog: bad state spec " + s);
        img[x] = static_cast<uint16_t>(out - 1);
        st.to[x] = index_of(target);
        ++x;
      }
      if (x != d) throw std::logic_error("catalog: missing letters in " + s);
    }
    st.out = Perm(std::move(img));
    states.push_back(std::move(st));
  }
  return MealyAutomaton(d, std::move(states));
}

struct Entry {
  int d;
  std::vector<std::string> states;
};

const std::map<std::string, Entry>& table() {
  static const std::map<std::string, Entry> t = {
      {"grigorchuk",
       {2, {"1: = 1", "a: + 1", "b: 1 a, 2 c", "c: 1 a, 2 d", "d: 1 1, 2 b"}}},
      {"grigorchuk-twin",
       {2, {"1: = 1", "a: + 1", "b: 1 c, 2 a", "c: 1 a, 2 d", "d: 1 1, 2 b"}}},
      {"third-grigorchuk", {2, {"1: = 1", "a: + 1", "b: 1 a, 2 c", "c: 1 1, 2 b"}}},
      {"img-z2i", {2, {"1: = 1", "a: + 1", "b: 1 a, 2 c", "c: 1 b, 2 1"}}},
      {"grigorchuk-erschler",
       {2, {"1: = 1", "a: + 1", "b: 1 a, 2 b", "c: 1 a, 2 d", "d: 1 1, 2 c"}}},
      {"fig7-brother", {2, {"a: 2 a, 1 c", "b: = d", "c: 1 d, 2 b", "d: 1 a, 2 c"}}},
      {"hanoi3", {3, {"1: = 1", "a: 1 a, 3 1, 2 1", "b: 3 1, 2 b, 1 1", "c: 2 1, 1 1, 3 c"}}},

      // depth-4 binary patterns
      {"P111", {2, {"1: = 1", "a: + 1", "b: 1 a, 2 c", "c: 1 b, 2 1"}}},
      {"P112", {2, {"1: = 1", "a: 2 a, 1 b", "b: 1 c, 2 1", "c: 1 a, 2 b"}}},
      {"P113", {2, {"1: = 1", "a: + 1", "b: 2 a, 1 c", "c: 1 b, 2 c"}}},
      {"P114", {2, {"1: = 1", "a: + 1", "b: 1 a, 2 b", "c: 2 b, 1 c"}}},
      {"P121", {2, {"1: = 1", "a: + 1", "b: 1 a, 2 c", "c: 1 1, 2 b"}}},
      {"P122", {2, {"1: = 1", "a: 2 c, 1 a", "b: 1 c, 2 a", "c: 1 1, 2 b"}}},
      {"P123", {2, {"a: 2 a, 1 c", "b: = d", "c: 1 d, 2 b", "d: 1 a, 2 c"}}},
      {"P124", {2, {"1: = 1", "a: + 1", "b: 1 b, 2 a", "c: 2 b, 1 c"}}},
      // the published transition table for P211 gives state a two outputs 2;
      // the second is corrected to 1 to keep the state invertible
      {"P211", {2, {"1: = 1", "a: 2 1, 1 b", "b: = c", "c: 1 a, 2 d", "d: 1 c, 2 1"}}},
      {"P212", {2, {"1: = 1", "a: 2 c, 1 a", "b: 1 a, 2 d", "c: 1 1, 2 b", "d: 1 b, 2 1"}}},
      {"P213", {2, {"a: 2 a, 1 c", "b: 1 a, 2 e", "c: 2 b, 1 d", "d: + a", "e: 2 d, 1 b"}}},
      {"P214", {2, {"1: = 1", "a: 2 1, 1 b", "b: = c", "c: 1 a, 2 d", "d: 1 c, 2 b"}}},
      {"P221", {2, {"1: = 1", "a: 2 1, 1 d", "b: 1 c, 2 a", "c: 1 1, 2 b", "d: = b"}}},
      {"P222", {2, {"1: = 1", "a: 2 a, 1 d", "b: 1 c, 2 a", "c: 1 1, 2 b", "d: 1 b, 2 1"}}},
      {"P223", {2, {"a: 2 a, 1 b", "b: 2 c, 1 e", "c: 1 a, 2 d", "d: 2 e, 1 c", "e: + b"}}},
      {"P224", {2, {"1: = 1", "a: 2 1, 1 b", "b: = c", "c: 1 a, 2 d", "d: 1 b, 2 c"}}},
      {"P311", {2, {"1: = 1", "a: + c", "b: 1 c, 2 a", "c: 1 1, 2 b"}}},
      {"P312", {2, {"1: = 1", "a: 2 1, 1 b", "b: 2 d, 1 b", "c: 1 1, 2 d", "d: 1 c, 2 a"}}},
      {"P313", {2, {"1: = 1", "a: 2 1, 1 b", "b: 2 1, 1 c", "c: 2 d, 1 a", "d: + d"}}},
      {"P314", {2, {"1: = 1", "a: 2 1, 1 b", "b: 2 a, 1 c", "c: + a"}}},
      {"P321", {2, {"1: = 1", "a: 1 1, 2 b", "b: 1 c, 2 a", "c: + a"}}},
      {"P322", {2, {"1: = 1", "a: 2 1, 1 b", "b: 2 1, 1 c", "c: 2 a, 1 d", "d: + a"}}},
      {"P323", {2, {"1: = 1", "a: 2 1, 1 b", "b: 2 c, 1 1", "c: 2 d, 1 a", "d: + d"}}},
      {"P324", {2, {"1: = 1", "a: 2 1, 1 b", "b: 2 c, 1 a", "c: + a"}}},
      {"P411", {2, {"1: = 1", "a: 2 c, 1 d", "b: 1 c, 2 a", "c: 1 1, 2 b", "d: 1 b, 2 1"}}},
      {"P414", {2, {"a: 2 c, 1 e", "b: 1 c, 2 a", "c: 1 d, 2 b", "d: = b", "e: 1 b, 2 d"}}},
      {"P421", {2, {"1: = 1", "a: 2 c, 1 d", "b: 1 a, 2 c", "c: 1 1, 2 b", "d: 1 b, 2 1"}}},
      {"P422", {2, {"1: = 1", "a: 2 1, 1 d", "b: 1 a, 2 c", "c: 1 1, 2 b", "d: 2 b, 1 d"}}},
      {"P423", {2, {"a: 2 a, 1 b", "b: 1 c, 2 e", "c: 2 a, 1 d", "d: = b", "e: 1 b, 2 d"}}},
      {"P424", {2, {"a: 2 c, 1 e", "b: 1 c, 2 a", "c: 1 b, 2 d", "d: = b", "e: 1 d, 2 b"}}},

      // depth-3 ternary patterns
      {"P1_1", {3, {"1: = 1", "a: + 1", "b: 1 1, 2 c, 3 b", "c: 2 a, 3 b, 1 c"}}},
      {"P1_2", {3, {"1: = 1", "a: + 1", "b: 1 a, 2 c, 3 b", "c: 2 1, 3 b, 1 c"}}},
      {"P2_1", {3, {"1: = 1", "a: + 1", "b: 3 1, 1 c, 2 b", "c: 3 a, 1 b, 2 c"}}},
      {"P3_1", {3, {"a: 1 a, 2 b, 3 c", "b: + c", "c: 2 a, 3 b, 1 c"}}},
      {"P3_2", {3, {"1: = 1", "a: + 1", "b: 1 a, 2 1, 3 b"}}},
      {"P4_1", {3, {"1: = 1", "a: 2 1, 3 b, 1 a", "b: 1 1, 2 b, 3 a"}}},
      {"P4_2", {3, {"a: 2 a, 3 b, 1 c", "b: + a", "c: - a"}}},
      {"P5_1", {3, {"a: 2 a, 3 c, 1 b", "b: + c", "c: 3 a, 1 c, 2 b"}}},
      {"P5_2", {3, {"1: = 1", "a: + 1", "b: 2 1, 3 b, 1 a"}}},
      {"P6_1", {3, {"a: 1 a, 2 b, 3 c", "b: 2 a, 3 b, 1 c", "c: - a"}}},
      {"P6_2", {3, {"a: 1 a, 2 b, 3 c", "b: + a", "c: - a"}}},
      {"P6_3", {3, {"1: = 1", "a: + 1", "b: 3 1, 1 a, 2 b"}}},
  };
  return t;
}

MealyAutomaton make_ggs(const std::string& name) {
  // ggs(a1,...,a_{d-1}): a = (1,..,1)sigma and b = (a^{a1},..,a^{a_{d-1}}, b)
  size_t open = name.find('('), close = name.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::invalid_argument("ggs: expected ggs(a1,...)");
  std::vector<int> vec;
  std::string args = name.substr(open + 1, close - open - 1);
  std::istringstream in(args);
  std::string tok;
  while (std::getline(in, tok, ',')) vec.push_back(std::stoi(tok));
  int d = static_cast<int>(vec.size()) + 1;
  if (d < 2) throw std::invalid_argument("ggs: vector too short");

  std::vector<MealyState> states;
  std::map<int, int> power_state;  // exponent -> state index
  MealyState id;
  id.name = "1";
  id.out = Perm(static_cast<unsigned>(d));
  id.to.assign(d, 0);
  states.push_back(id);
  power_state[0] = 0;
  std::vector<uint16_t> cyc(d);
  for (int i = 0; i < d; ++i) cyc[i] = static_cast<uint16_t>((i + 1) % d);
  for (int e : vec) {
    int k = ((e % d) + d) % d;
    if (k == 0 || power_state.count(k)) continue;
    MealyState s;
    s.name = k == 1 ? "a" : "a" + std::to_string(k);
    Perm c{cyc};
    Perm acc(static_cast<unsigned>(d));
    for (int i = 0; i < k; ++i) acc = c * acc;
    s.out = acc;
    s.to.assign(d, 0);
    power_state[k] = static_cast<int>(states.size());
    states.push_back(std::move(s));
  }
  if (!power_state.count(1)) {
    MealyState s;
    s.name = "a";
    s.out = Perm{cyc};
    s.to.assign(d, 0);
    power_state[1] = static_cast<int>(states.size());
    states.push_back(std::move(s));
  }
  MealyState b;
  b.name = "b";
  b.out = Perm(static_cast<unsigned>(d));
  b.to.assign(d, 0);
  int b_idx = static_cast<int>(states.size());
  for (int x = 0; x + 1 < d; ++x) b.to[x] = power_state.at(((vec[x] % d) + d) % d);
  b.to[d - 1] = b_idx;
  states.push_back(std::move(b));
  return MealyAutomaton(d, std::move(states));
}

}  // namespace

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : table()) names.push_back(name);
  names.push_back("ggs(a1,...,ak)");
  return names;
}

MealyAutomaton catalog_automaton(const std::string& name) {
  if (name.rfind("ggs", 0) == 0) return make_ggs(name);
  auto it = table().find(name);
  if (it == table().end()) {
    std::string msg = "unknown automaton '" + name + "'; available:";
    for (const std::string& n : catalog_names()) msg += " " + n;
    throw std::invalid_argument(msg);
  }
  return build(it->second.d, it->second.states);
}

}  // namespace ftc
