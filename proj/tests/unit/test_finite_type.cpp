#include "doctest.h"
#include "ftc/finite_type.hpp"
#include "ftc/patterns.hpp"

using namespace ftc;

namespace {

Perm perm_of(const std::string& text, unsigned degree) {
  auto p = parse_perm(text, degree, nullptr);
  REQUIRE(p.has_value());
  return *p;
}

std::vector<Perm> full_gens(int d, int depth) {
  Ambient amb(d, depth, false);
  Subgroup whole = subgroup_from_elems(amb, amb.all_indices());
  std::vector<Perm> gens;
  for (uint32_t g : whole.gens) gens.push_back(amb.elem(g));
  return gens;
}

}  // namespace

TEST_CASE("full pattern of (2,2): stabilizer, dimension, truncations") {
  PatternAnalysis pa(2, 2, false, full_gens(2, 2));
  CHECK(pa.order() == 8);
  CHECK(pa.st_order() == 4);  // independent bottom labels
  CHECK(!pa.finite());
  HausdorffDim h = pa.hausdorff();
  CHECK(h.value == doctest::Approx(1.0));
  CHECK(h.exact);
  CHECK(h.num == 1);
  CHECK(h.den == 1);

  // order law at every constructed level
  CHECK(pa.truncation(3).order() == BigUint(8) * BigUint::pow(4, 2));
  CHECK(pa.truncation(4).order() == BigUint(8) * BigUint::pow(4, 2 + 4));
  CHECK(pa.truncation(5).order() == BigUint::pow(2, 31));  // (d!)^(2^5-1)

  CHECK(pa.level_transitivity().kind == LevelTransitivity::YesWpInfinite);
  CHECK(pa.fractality() == Fractality::SuperStronglyFractal);
  TfgStatus tfg = pa.tfg_status();
  CHECK(tfg.kind == TfgStatus::NotTFG);
  JiStatus ji = pa.just_infinite_status();
  CHECK(ji.kind == JiStatus::Undecided);
  CHECK(ji.indices.size() >= 2);  // strictly growing derived indices
  CHECK(ji.indices[0] != ji.indices[1]);
}

TEST_CASE("the three infinite (2,2) patterns are NotTFG and super strongly fractal") {
  Ambient amb(2, 2, false);
  EnumerateOutcome out = enumerate_minimal_patterns(amb);
  int infinite = 0, finite = 0, ssf = 0, not_tfg = 0;
  for (const PatternRecord& rec : out.db.patterns) {
    PatternAnalysis pa(2, 2, false, rec.gens);
    if (pa.finite()) {
      ++finite;
      CHECK(pa.hausdorff().value == 0.0);
      continue;
    }
    ++infinite;
    if (pa.fractality() == Fractality::SuperStronglyFractal) ++ssf;
    if (pa.tfg_status().kind == TfgStatus::NotTFG) ++not_tfg;
  }
  CHECK(finite == 3);
  CHECK(infinite == 3);
  CHECK(ssf == 3);
  CHECK(not_tfg == 3);
}

TEST_CASE("torsion-free family: generator order is d^2") {
  for (int d : {2, 3, 5}) {
    TreeGeometry geo(d, 2);
    std::vector<uint16_t> cyc(d);
    for (int i = 0; i < d; ++i) cyc[i] = static_cast<uint16_t>((i + 1) % d);
    std::vector<Perm> labels(geo.internal_count(), Perm(d));
    labels[geo.internal_index(0, 0)] = Perm(cyc);
    labels[geo.internal_index(1, d - 1)] = Perm(cyc);
    TreeAut alpha(geo, labels);
    CHECK(alpha.to_leaf_perm().order() == static_cast<uint64_t>(d) * d);
    PatternAnalysis pa(d, 2, true, {alpha.to_leaf_perm()});
    CHECK(pa.is_minimal());
    CHECK(pa.order() == static_cast<uint64_t>(d) * d);
  }
}

TEST_CASE("maximal branching pattern of the full group is everything") {
  PatternAnalysis pa(2, 2, false, full_gens(2, 2));
  BranchingInfo b = pa.maximal_branching();
  CHECK(b.ktilde_order == 8);
  CHECK(b.index == 1);
  CHECK(b.normal);
}

TEST_CASE("wreath perfect check") {
  CHECK(!wreath_perfect_check(2, {perm_of("(1,2)", 2)}).perfect);
  CHECK(!wreath_perfect_check(3, {perm_of("(1,2)", 3), perm_of("(1,2,3)", 3)}).perfect);
  CHECK(wreath_perfect_check(5, {perm_of("(1,2,3)", 5), perm_of("(3,4,5)", 5)}).perfect);
  CHECK_THROWS(wreath_perfect_check(3, {perm_of("(1,2)", 3)}));
}

TEST_CASE("preimage at a higher depth") {
  // depth-1 full pattern lifted to depth 2 gives the whole of Aut(T^2)
  std::vector<Perm> gens = preimage_at_depth(2, false, {perm_of("(1,2)", 2)}, 1, 2);
  PatternAnalysis pa(2, 2, false, gens);
  CHECK(pa.order() == 8);
  CHECK(pa.is_minimal());
}

TEST_CASE("vertex perm portraits round trip") {
  TreeGeometry geo(3, 2);
  Ambient amb(3, 2, false);
  for (uint32_t i = 0; i < amb.size(); i += 111) {
    TreeAut a = *tree_aut_from_leaf_perm(geo, amb.elem(i));
    CHECK(vertex_perm_to_aut(geo, a.to_vertex_perm(2)) == a);
  }
}
