#include "doctest.h"
#include <cmath>

#include "ftc/mealy.hpp"
#include "ftc/perm_group.hpp"

using namespace ftc;

namespace {

Perm perm_of(const std::string& text, unsigned degree) {
  auto p = parse_perm(text, degree, nullptr);
  REQUIRE(p.has_value());
  return *p;
}

}  // namespace

TEST_CASE("catalog shapes") {
  MealyAutomaton hanoi = catalog_automaton("hanoi3");
  CHECK(hanoi.d() == 3);
  CHECK(hanoi.state_count() == 4);
  int a = hanoi.state_index("a");
  CHECK(hanoi.state(a).out == perm_of("(2,3)", 3));  // fixes 1, swaps {2,3}

  MealyAutomaton img = catalog_automaton("img-z2i");
  // a = (1,1)s, b = (a,c), c = (b,1)
  CHECK(img.state(img.state_index("a")).out == perm_of("(1,2)", 2));
  int b = img.state_index("b");
  CHECK(img.state(b).out.is_identity());
  CHECK(img.state(b).to[0] == img.state_index("a"));
  CHECK(img.state(b).to[1] == img.state_index("c"));
  int c = img.state_index("c");
  CHECK(img.state(c).to[0] == img.state_index("b"));
  CHECK(img.state(c).to[1] == img.state_index("1"));

  MealyAutomaton fig7 = catalog_automaton("fig7-brother");
  int fa = fig7.state_index("a");
  CHECK(fig7.state(fa).out == perm_of("(1,2)", 2));
  CHECK(fig7.state(fa).to[0] == fa);
  CHECK(fig7.state(fa).to[1] == fig7.state_index("c"));

  CHECK_THROWS(catalog_automaton("nonsense"));
}

TEST_CASE("state expansion") {
  MealyAutomaton grig = catalog_automaton("grigorchuk");
  int a = grig.state_index("a"), b = grig.state_index("b");
  CHECK(grig.expand(a, 1).label(0, 0) == perm_of("(1,2)", 2));
  // b = (a, c): root trivial, left subtree starts with sigma, right with id
  TreeAut eb = grig.expand(b, 2);
  CHECK(eb.label(0, 0).is_identity());
  CHECK(eb.label(1, 0) == perm_of("(1,2)", 2));
  CHECK(eb.label(1, 1).is_identity());

  int one = grig.state_index("1");
  for (int n = 1; n <= 5; ++n) CHECK(grig.expand(one, n).is_identity());
}

TEST_CASE("truncated groups") {
  MealyAutomaton hanoi = catalog_automaton("hanoi3");
  std::vector<Perm> g1 = hanoi.truncated_gens(1);
  PermGroup pi1(3, g1);
  CHECK(pi1.order().as_u64() == 6);  // Sym(3)
  CHECK(derived_subgroup(pi1).index_in(pi1).as_u64() == 2);

  MealyAutomaton trivial(2, {{"e", Perm(2u), {0, 0}}});
  PermGroup t(4, trivial.truncated_gens(2));
  CHECK(t.is_trivial());
}

TEST_CASE("section closure: sections of expansions are expansions") {
  for (const std::string& name :
       {"grigorchuk", "img-z2i", "hanoi3", "fig7-brother", "P3_2", "P6_2"}) {
    MealyAutomaton a = catalog_automaton(name);
    for (size_t q = 0; q < a.state_count(); ++q)
      for (int lvl = 1; lvl <= 2; ++lvl)
        for (uint32_t v = 0; v < static_cast<uint32_t>(std::pow(a.d(), lvl)); ++v) {
          TreeAut big = a.expand(static_cast<int>(q), 3 + lvl);
          CHECK(section(big, lvl, v, 3) == a.expand(a.walk(static_cast<int>(q), lvl, v), 3));
        }
  }
}

TEST_CASE("ggs automata satisfy b = (a^a1, a^a2, b)") {
  for (auto vec : {std::pair{1, 0}, {1, 1}, {1, 2}}) {
    MealyAutomaton g =
        catalog_automaton("ggs(" + std::to_string(vec.first) + "," + std::to_string(vec.second) + ")");
    int a = g.state_index("a"), b = g.state_index("b");
    REQUIRE(a >= 0);
    REQUIRE(b >= 0);
    for (int n = 1; n <= 4; ++n) {
      TreeAut eb = g.expand(b, n + 1);
      TreeAut ea = g.expand(a, n);
      TreeAut target0 = ea;
      // section at vertex x equals a^{alpha_x}, last section equals b
      auto power = [&](int k) {
        TreeAut acc = TreeAut::identity(TreeGeometry(3, n));
        for (int i = 0; i < k; ++i) acc = compose(acc, ea);
        return acc;
      };
      CHECK(section(eb, 1, 0, n) == power(vec.first));
      CHECK(section(eb, 1, 1, n) == power(vec.second));
      CHECK(section(eb, 1, 2, n) == g.expand(b, n));
    }
  }
}

TEST_CASE("fig7 derived generators expand to the first Grigorchuk states") {
  MealyAutomaton bro = catalog_automaton("fig7-brother");
  MealyAutomaton grig = catalog_automaton("grigorchuk");
  int n = 6;
  auto x = [&](const std::string& s) { return bro.expand(bro.state_index(s), n); };
  TreeAut ap = compose(x("a"), x("d").inverse());
  TreeAut bp = compose(x("d"), x("b").inverse());
  TreeAut cp = compose(x("c"), x("d").inverse());
  TreeAut dp = compose(x("b"), x("c").inverse());
  CHECK(ap == grig.expand(grig.state_index("a"), n));
  CHECK(bp == grig.expand(grig.state_index("b"), n));
  CHECK(cp == grig.expand(grig.state_index("c"), n));
  CHECK(dp == grig.expand(grig.state_index("d"), n));
}

TEST_CASE("file format round trip and shorthands") {
  MealyAutomaton a = catalog_automaton("grigorchuk");
  MealyAutomaton back = parse_mealy(format_mealy(a));
  CHECK(back.state_count() == a.state_count());
  for (int n = 1; n <= 4; ++n)
    for (size_t q = 0; q < a.state_count(); ++q)
      CHECK(back.expand(static_cast<int>(q), n) == a.expand(static_cast<int>(q), n));

  MealyAutomaton s = parse_mealy(
      "mealy 1\nalphabet 3\nstate a\non * out +1 to b\nstate b\non * out = to a\n");
  CHECK(s.state(0).out == perm_of("(1,2,3)", 3));
  CHECK(s.state(1).out.is_identity());
  MealyAutomaton m = parse_mealy(
      "mealy 1\nalphabet 3\nstate a\non * out -1 to a\n");
  CHECK(m.state(0).out == perm_of("(1,3,2)", 3));

  CHECK_THROWS(parse_mealy("mealy 1\nalphabet 2\nstate a\non 1 out 1 to a\non 2 out 1 to a\n"));
  CHECK_THROWS(parse_mealy("mealy 1\nalphabet 2\nstate a\non 1 out 1 to zz\non 2 out 2 to a\n"));
}

TEST_CASE("word probes") {
  MealyAutomaton grig = catalog_automaton("grigorchuk");
  ProbeReport a_rep = word_section_probe(grig, parse_word("a"), 16, 6);
  CHECK(a_rep.truncation_order == 2);
  CHECK(a_rep.order_within_k);
  CHECK(!a_rep.infinite.has_value());

  ProbeReport empty = word_section_probe(grig, parse_word(""), 4, 3);
  CHECK(empty.truncation_order == 1);

  MealyAutomaton bro = catalog_automaton("fig7-brother");
  ProbeReport g_rep =
      word_section_probe(bro, parse_word("b c^-2 b^-1 d^2 b^-1 c d a^-1"), 16, 8);
  REQUIRE(g_rep.infinite.has_value());
  CHECK(g_rep.infinite->power == 8);
  CHECK(g_rep.infinite->level == 6);
  CHECK(g_rep.infinite->vertex == 0);  // leftmost level-6 vertex
}
