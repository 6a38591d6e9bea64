#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ftc/finite_type.hpp"
#include "ftc/mealy.hpp"
#include "ftc/patterns.hpp"
#include "../p33_data.hpp"

using namespace ftc;

#ifndef FTC_DATA_DIR
#define FTC_DATA_DIR "data"
#endif

TEST_CASE("shipped ternary depth-3 database matches the published generators") {
  PatternDatabase db = load_database(std::string(FTC_DATA_DIR) + "/p33_patterns.ftdb");
  CHECK(db.d == 3);
  CHECK(db.depth == 3);
  CHECK(db.cyclic);
  REQUIRE(db.patterns.size() == 12);

  TreeGeometry lg(3, 1);
  Perm a3 = embed(TreeAut(lg, {*parse_perm("(1,2,3)", 3, nullptr)}), 0, 0, 3).to_leaf_perm();
  std::set<SubKey> expected;
  for (auto& [name, cycles] : testdata::p33_patterns) {
    PatternRecord rec;
    rec.gens = {*parse_perm(cycles, 27, nullptr), a3};
    expected.insert(record_key(rec, 27));
  }
  std::set<SubKey> shipped;
  SubKey prev;
  for (const PatternRecord& rec : db.patterns) {
    SubKey k = record_key(rec, 27);
    CHECK(prev < k);  // canonical key order
    prev = k;
    shipped.insert(k);
    PatternAnalysis pa(3, 3, true, rec.gens, 3);
    CHECK(pa.is_minimal());
  }
  CHECK(shipped == expected);
}

TEST_CASE("shipped alias file regenerates from the automaton catalog") {
  std::ifstream in(std::string(FTC_DATA_DIR) + "/pattern_aliases.txt");
  REQUIRE(in.good());
  std::string line;
  size_t checked = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name, ambient, hex;
    int d, depth;
    uint64_t order;
    REQUIRE((ls >> name >> d >> depth >> ambient >> order >> hex));
    MealyAutomaton a = catalog_automaton(name);
    CHECK(a.d() == d);
    PatternRecord rec;
    rec.gens = a.truncated_gens(depth);
    SubKey k = record_key(rec, static_cast<int>(rec.gens[0].degree()));
    CHECK(k.order == order);
    CHECK(k.hex() == hex);
    ++checked;
  }
  CHECK(checked == 42);  // 30 binary depth-4 entries + 12 ternary depth-3
}

TEST_CASE("shipped automaton file parses back to the catalog entry") {
  MealyAutomaton a = load_mealy(std::string(FTC_DATA_DIR) + "/grigorchuk.mealy");
  MealyAutomaton ref = catalog_automaton("grigorchuk");
  REQUIRE(a.state_count() == ref.state_count());
  for (size_t q = 0; q < a.state_count(); ++q)
    CHECK(a.expand(static_cast<int>(q), 4) == ref.expand(static_cast<int>(q), 4));
}
