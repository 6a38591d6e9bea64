#include <random>

#include "doctest.h"
#include "ftc/tree.hpp"
#include "../test_util.hpp"

using namespace ftc;
using testutil::random_aut;

namespace {

Perm perm_of(const std::string& text, unsigned degree) {
  std::string err;
  auto p = parse_perm(text, degree, &err);
  REQUIRE_MESSAGE(p.has_value(), err);
  return *p;
}

TreeAut aut_of(const TreeGeometry& geo, const std::string& text) {
  auto a = tree_aut_from_leaf_perm(geo, perm_of(text, geo.leaves()));
  REQUIRE(a.has_value());
  return *a;
}

// independent oracle: compose image tables point by point
Perm table_compose(const Perm& a, const Perm& b) {
  std::vector<uint16_t> img(a.degree());
  for (unsigned i = 0; i < a.degree(); ++i) img[i] = a[b[i]];
  return Perm(std::move(img));
}

}  // namespace

TEST_CASE("compose matches the leaf table oracle") {
  TreeGeometry geo(2, 2);
  TreeAut a = aut_of(geo, "(1,3)(2,4)");  // root swap
  TreeAut b = aut_of(geo, "(1,2)");       // left child swap
  Perm expect = table_compose(a.to_leaf_perm(), b.to_leaf_perm());
  CHECK(expect == perm_of("(1,4,2,3)", 4));  // 1->4, 4->2, 2->3, 3->1
  CHECK(compose(a, b).to_leaf_perm() == expect);
}

TEST_CASE("compose identity and inverse laws") {
  std::mt19937 rng(12345);
  for (auto [d, D] : {std::pair{2, 2}, {2, 4}, {3, 2}, {3, 3}}) {
    TreeGeometry geo(d, D);
    TreeAut id = TreeAut::identity(geo);
    for (int trial = 0; trial < 100; ++trial) {
      TreeAut g = random_aut(rng, geo);
      CHECK(compose(id, g) == g);
      CHECK(compose(g, id) == g);
      CHECK(compose(g, g.inverse()).is_identity());
      CHECK(compose(g.inverse(), g).is_identity());
    }
  }
  TreeGeometry g22(2, 2);
  CHECK_THROWS(compose(TreeAut::identity(g22), TreeAut::identity(TreeGeometry(2, 3))));
}

TEST_CASE("sections") {
  TreeGeometry geo(2, 2);
  TreeAut alpha = aut_of(geo, "(1,2)(3,4)");
  // alpha has trivial root label and sigma below both level-1 vertices
  TreeAut s = section(alpha, 1, 0, 1);
  CHECK(s.label(0, 0) == perm_of("(1,2)", 2));
  CHECK(section(alpha, 1, 1, 1).label(0, 0) == perm_of("(1,2)", 2));
  CHECK(project(alpha, 1).is_identity());

  TreeAut id = TreeAut::identity(geo);
  for (uint32_t v = 0; v < 2; ++v) CHECK(section(id, 1, v, 1).is_identity());
  CHECK_THROWS(section(alpha, 1, 0, 2));
}

TEST_CASE("section of a product: (gh)|_v = g|_{h(v)} h|_v") {
  std::mt19937 rng(777);
  for (auto [d, D] : {std::pair{2, 4}, {3, 3}}) {
    TreeGeometry geo(d, D);
    for (int trial = 0; trial < 200; ++trial) {
      TreeAut g = random_aut(rng, geo);
      TreeAut h = random_aut(rng, geo);
      int lvl = 1 + static_cast<int>(rng() % static_cast<unsigned>(D - 1));
      int k = D - lvl;
      uint32_t v = rng() % geo.level_size[lvl];
      TreeAut lhs = section(compose(g, h), lvl, v, k);
      TreeAut rhs = compose(section(g, lvl, h.apply(lvl, v), k), section(h, lvl, v, k));
      CHECK(lhs.to_leaf_perm() == rhs.to_leaf_perm());
      // inverse law: (g^-1)|_v = (g|_{g^-1(v)})^-1
      uint32_t pre = g.inverse().apply(lvl, v);
      CHECK(section(g.inverse(), lvl, v, k) == section(g, lvl, pre, k).inverse());
    }
  }
}

TEST_CASE("nested sections: g|_{vw} = (g|_v)|_w") {
  std::mt19937 rng(31337);
  TreeGeometry geo(3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    TreeAut g = random_aut(rng, geo);
    uint32_t v = rng() % 3, w = rng() % 3;
    TreeAut lhs = section(g, 2, v * 3 + w, 1);
    TreeAut rhs = section(section(g, 1, v, 2), 1, w, 1);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("project is a homomorphism onto truncations") {
  std::mt19937 rng(999);
  TreeGeometry geo(2, 4);
  for (int trial = 0; trial < 200; ++trial) {
    TreeAut g = random_aut(rng, geo);
    TreeAut h = random_aut(rng, geo);
    int k = 1 + static_cast<int>(rng() % 4);
    CHECK(project(compose(g, h), k).to_leaf_perm() ==
          table_compose(project(g, k).to_leaf_perm(), project(h, k).to_leaf_perm()));
    CHECK(project(g, 4) == g);
  }
}

TEST_CASE("embed") {
  TreeGeometry label_geo(2, 1);
  TreeAut sigma(label_geo, {perm_of("(1,2)", 2)});
  CHECK(embed(sigma, 1, 0, 2).to_leaf_perm() == perm_of("(1,2)", 4));
  CHECK(embed(sigma, 1, 1, 2).to_leaf_perm() == perm_of("(3,4)", 4));
  CHECK(embed(TreeAut::identity(label_geo), 1, 0, 2).is_identity());
  CHECK_THROWS(embed(sigma, 2, 0, 2));

  // section(embed(v,a), v, depth(a)) = a
  std::mt19937 rng(4242);
  TreeGeometry geo(3, 2);
  for (int trial = 0; trial < 100; ++trial) {
    TreeAut a = random_aut(rng, geo);
    uint32_t v = rng() % 3;
    CHECK(section(embed(a, 1, v, 3), 1, v, 2) == a);
    // homomorphism: embed(v, ab) = embed(v,a) embed(v,b)
    TreeAut b = random_aut(rng, geo);
    CHECK(embed(compose(a, b), 1, v, 3).to_leaf_perm() ==
          table_compose(embed(a, 1, v, 3).to_leaf_perm(), embed(b, 1, v, 3).to_leaf_perm()));
  }
}

TEST_CASE("leaf round trip") {
  TreeGeometry geo(2, 2);
  TreeAut alpha = aut_of(geo, "(1,2)(3,4)");
  CHECK(alpha.to_leaf_perm() == perm_of("2 1 4 3", 4));
  CHECK(TreeAut::identity(geo).to_leaf_perm() == perm_of("1 2 3 4", 4));
  // 1->2 stays in the first level-1 block but 2->3 leaves it
  CHECK(!tree_aut_from_leaf_perm(geo, perm_of("2 3 4 1", 4)).has_value());

  std::mt19937 rng(2024);
  for (auto [d, D] : {std::pair{2, 2}, {2, 4}, {3, 2}, {3, 3}}) {
    TreeGeometry g(d, D);
    for (int trial = 0; trial < 250; ++trial) {
      TreeAut a = random_aut(rng, g);
      auto back = tree_aut_from_leaf_perm(g, a.to_leaf_perm());
      REQUIRE(back.has_value());
      CHECK(*back == a);
    }
  }
}

TEST_CASE("vertex permutations are consistent with leaf tables") {
  std::mt19937 rng(5150);
  TreeGeometry geo(3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    TreeAut a = random_aut(rng, geo);
    Perm va = a.to_vertex_perm(3);
    CHECK(va == leaf_to_vertex_perm(geo, a.to_leaf_perm(), 3));
    for (int k = 1; k <= 3; ++k)
      for (uint32_t v = 0; v < geo.level_size[k]; ++v)
        CHECK(va[geo.voff[k - 1] + v] == geo.voff[k - 1] + a.apply(k, v));
  }
}

TEST_CASE("parser accepts both notations and rejects junk") {
  CHECK(perm_of("1 4 2 3", 4) == perm_of("(2,4,3)", 4));
  CHECK(perm_of("(1,4,2,3)", 4) == perm_of("4 3 1 2", 4));
  CHECK(perm_of("()", 3).is_identity());
  std::string err;
  CHECK(!parse_perm("1 2 2 4", 4, &err).has_value());
  CHECK(!parse_perm("1 2 3", 4, &err).has_value());
  CHECK(!parse_perm("(1,5)", 4, &err).has_value());
  CHECK(!parse_perm("(1,2", 4, &err).has_value());
  CHECK(!parse_perm("(1,2)(2,3)", 4, &err).has_value());
  CHECK(format_image_list(perm_of("(1,4,2,3)", 4)) == "4 3 1 2");
  CHECK(format_cycles(perm_of("4 3 1 2", 4)) == "(1,4,2,3)");
  CHECK(format_cycles(Perm(4u)) == "()");
}
