// Acceptance suite: reproduces the published enumeration counts, analysis
// verdicts, classifications and automaton identifications at fixed
// tolerances, one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ftc/classify.hpp"
#include "ftc/gamma.hpp"
#include "ftc/mealy.hpp"
#include "ftc/patterns.hpp"
#include "../p33_data.hpp"

using namespace ftc;
using Clock = std::chrono::steady_clock;

namespace {

struct Gate {
  int passed = 0, failed = 0;
  std::vector<std::string> notes;

  void sub(bool ok, const std::string& what) {
    if (!ok) notes.push_back(what);
    (ok ? passed : failed) += 0;  // counted per criterion below
    sub_ok &= ok;
  }
  bool sub_ok = true;
  void begin() {
    sub_ok = true;
    notes.clear();
  }
  void end(int n, const std::string& title, double secs, double limit) {
    bool ok = sub_ok && (limit <= 0 || secs <= limit);
    if (limit > 0 && secs > limit)
      notes.push_back("time " + std::to_string(secs) + "s over limit " +
                      std::to_string(limit) + "s");
    printf("%s criterion %d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", n, title.c_str(), secs);
    for (const std::string& m : notes) printf("       - %s\n", m.c_str());
    (ok ? passed : failed) += 1;
    fflush(stdout);
  }
};

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

PatternDatabase enumerate_db(int d, int D, bool cyclic = false) {
  Ambient amb(d, D, cyclic);
  EnumerateOutcome out = enumerate_minimal_patterns(amb);
  return std::move(out.db);
}

int find_by_key(const PatternDatabase& db, const SubKey& key, unsigned degree) {
  for (size_t i = 0; i < db.patterns.size(); ++i)
    if (db.patterns[i].order == key.order && record_key(db.patterns[i], degree) == key)
      return static_cast<int>(i);
  return -1;
}

SubKey key_of_gens(const std::vector<Perm>& gens, unsigned degree) {
  PatternRecord rec;
  rec.gens = gens;
  return record_key(rec, static_cast<int>(degree));
}

struct Dbs {
  PatternDatabase d22, d23, d32, d24;
  std::vector<PatternReport> r23, r32, r24;
};

void criterion1(Gate& g, Dbs& dbs) {
  g.begin();
  auto t0 = Clock::now();
  auto t = Clock::now();
  dbs.d22 = enumerate_db(2, 2);
  double s22 = elapsed(t);
  g.sub(dbs.d22.patterns.size() == 6, "(2,2) count " + std::to_string(dbs.d22.patterns.size()));
  g.sub(s22 < 5, "(2,2) time");
  t = Clock::now();
  dbs.d23 = enumerate_db(2, 3);
  double s23 = elapsed(t);
  g.sub(dbs.d23.patterns.size() == 60, "(2,3) count " + std::to_string(dbs.d23.patterns.size()));
  g.sub(s23 < 30, "(2,3) time");
  t = Clock::now();
  dbs.d32 = enumerate_db(3, 2);
  double s32 = elapsed(t);
  g.sub(dbs.d32.patterns.size() == 588, "(3,2) count " + std::to_string(dbs.d32.patterns.size()));
  g.sub(s32 < 600, "(3,2) time");
  t = Clock::now();
  dbs.d24 = enumerate_db(2, 4);
  double s24 = elapsed(t);
  g.sub(dbs.d24.patterns.size() == 4544, "(2,4) count " + std::to_string(dbs.d24.patterns.size()));
  g.sub(s24 < 1800, "(2,4) time " + std::to_string(s24) + "s (published 13m27s)");
  g.end(1, "enumeration counts and times (6/60/588/4544)", elapsed(t0), 0);
}

void criterion2(Gate& g, Dbs& dbs) {
  g.begin();
  auto t0 = Clock::now();
  AnalysisOptions opts;
  ClassificationReport rep = classify(dbs.d22, opts);
  int fin = 0, inf = 0, not_tfg = 0, ssf = 0, rigid = 0, notrigid = 0;
  std::set<std::string> fin_labels;
  for (const PatternReport& r : rep.reports) {
    if (r.finite) {
      ++fin;
      fin_labels.insert(r.finite_label);
      continue;
    }
    ++inf;
    if (r.tfg.kind == TfgStatus::NotTFG) ++not_tfg;
    if (r.fractality == Fractality::SuperStronglyFractal) ++ssf;
    if (r.rigidity.kind == RigidityKind::Rigid) ++rigid;
    if (r.rigidity.kind == RigidityKind::NotRigid) ++notrigid;
  }
  g.sub(fin == 3 && inf == 3, "3 finite / 3 infinite");
  g.sub(fin_labels == std::set<std::string>{"1", "C2"}, "finite classes {1, C2}");
  g.sub(not_tfg == 3, "all infinite NotTFG");
  g.sub(ssf == 3, "all infinite super strongly fractal");
  g.sub(rep.upper == 5 && rep.lower == 5, "exactly 5 classes, bounds coincide");
  g.sub(rigid == 2 && notrigid == 1, "rigidity split 2/1");
  g.end(2, "(2,2) analysis and classification", elapsed(t0), 0);
}

void criterion3(Gate& g, Dbs& dbs) {
  g.begin();
  auto t0 = Clock::now();
  AnalysisOptions opts;
  opts.workers = 2;
  ClassificationReport rep = classify(dbs.d23, opts);
  dbs.r23 = rep.reports;
  int fin = 0, inf = 0, nt3 = 0, nt4 = 0, ssf = 0, sf = 0, nf_inf = 0;
  std::set<std::string> fin_labels;
  for (const PatternReport& r : rep.reports) {
    if (r.finite) {
      ++fin;
      fin_labels.insert(r.finite_label);
      continue;
    }
    ++inf;
    if (r.tfg.kind == TfgStatus::NotTFG && r.tfg.n == 3) ++nt3;
    if (r.tfg.kind == TfgStatus::NotTFG && r.tfg.n == 4) ++nt4;
    if (r.fractality == Fractality::SuperStronglyFractal) ++ssf;
    if (r.fractality == Fractality::StronglyFractal) ++sf;
    if (r.fractality == Fractality::NotFractal) ++nf_inf;
  }
  g.sub(fin == 23 && inf == 37, "23 finite / 37 infinite");
  g.sub(nt3 == 27 && nt4 == 10, "NotTFG split 27@3, 10@4");
  g.sub(ssf == 13 && sf == 12 && nf_inf == 12, "fractality 13/12/12");
  g.sub(fin_labels == std::set<std::string>{"1", "C2", "C2xC2", "D4"},
        "finite classes {1, C2, C2xC2, D4}");
  g.sub(rep.lower == 16 && rep.upper == 23, "bounds (16, 23), got (" +
        std::to_string(rep.lower) + ", " + std::to_string(rep.upper) + ")");
  g.end(3, "(2,3) analysis and classification", elapsed(t0), 0);
}

void criterion4(Gate& g, Dbs& dbs) {
  g.begin();
  auto t0 = Clock::now();
  AnalysisOptions opts;
  opts.workers = 2;
  ClassificationReport rep = classify(dbs.d24, opts, /*tfg_only=*/true);
  dbs.r24 = rep.reports;
  int tfg6 = 0, tfg_other = 0, tfg_ssf = 0;
  for (const PatternReport& r : rep.reports) {
    if (r.finite || r.tfg.kind != TfgStatus::TFG) continue;
    if (r.tfg.n == 6)
      ++tfg6;
    else
      ++tfg_other;
    if (r.fractality == Fractality::SuperStronglyFractal) ++tfg_ssf;
  }
  g.sub(tfg6 == 32 && tfg_other == 0, "exactly 32 TFG, all certified at n0 = 6");
  g.sub(tfg_ssf == 32, "all 32 super strongly fractal");
  g.sub(rep.upper == 8 && rep.lower == 8, "exactly 8 classes among the 32, got (" +
        std::to_string(rep.lower) + ", " + std::to_string(rep.upper) + ")");

  // gamma graph of P111 and P121: two classes, each with a loop and an edge
  GammaAmbient gamb(2, 4);
  auto elems_of = [&](const std::string& name) {
    PatternRecord rec;
    rec.gens = catalog_automaton(name).truncated_gens(4);
    return record_elements(rec, 16);
  };
  std::vector<Perm> p111 = elems_of("P111"), p121 = elems_of("P121");
  GammaGraph graph = gamma_graph(gamb, p111, p121);
  g.sub(graph.vertex_count() == 2 && graph.has_cycle,
        "Gamma(P111, P121): 2 vertices with a cycle");

  // closure identifications
  auto identify = [&](const std::string& automaton) -> SubKey {
    MealyAutomaton a = catalog_automaton(automaton);
    PatternRecord rec;
    rec.gens = a.truncated_gens(4);
    SubKey k = record_key(rec, 16);
    int idx = find_by_key(dbs.d24, k, 16);
    if (idx < 0) return {};
    PatternAnalysis pa(2, 4, false, dbs.d24.patterns[idx].gens);
    ClosureVerdict v = closure_check(a, pa);
    return v.closure_equals() ? k : SubKey{};
  };
  SubKey k123 = key_of_gens(catalog_automaton("P123").truncated_gens(4), 16);
  SubKey k111 = key_of_gens(catalog_automaton("P111").truncated_gens(4), 16);
  SubKey k121 = key_of_gens(catalog_automaton("P121").truncated_gens(4), 16);
  g.sub(identify("grigorchuk") == k123, "closure of Grigorchuk = P123");
  g.sub(identify("grigorchuk-twin") == k123, "closure of the twin = P123");
  g.sub(identify("img-z2i") == k111, "closure of IMG(z^2+i) = P111");
  g.sub(identify("third-grigorchuk") == k121, "closure of the third Grigorchuk = P121");
  g.sub(identify("grigorchuk-erschler") == k121, "closure of Grigorchuk-Erschler = P121");
  g.end(4, "(2,4) tfg set, classification and closures", elapsed(t0), 1200);
}

void criterion5(Gate& g, Dbs& dbs) {
  g.begin();
  auto t0 = Clock::now();
  AnalysisOptions opts;
  opts.workers = 2;
  ClassificationReport rep = classify(dbs.d32, opts);
  dbs.r32 = rep.reports;
  int fin = 0, inf = 0, nt2 = 0, nt3 = 0, tfg3 = 0, und5 = 0, ssf = 0, fr = 0, nf_inf = 0;
  std::set<std::string> fin_labels;
  for (const PatternReport& r : rep.reports) {
    if (r.finite) {
      ++fin;
      fin_labels.insert(r.finite_label);
      continue;
    }
    ++inf;
    if (r.tfg.kind == TfgStatus::NotTFG && r.tfg.n == 2) ++nt2;
    if (r.tfg.kind == TfgStatus::NotTFG && r.tfg.n == 3) ++nt3;
    if (r.tfg.kind == TfgStatus::TFG && r.tfg.n == 3) ++tfg3;
    if (r.tfg.kind == TfgStatus::Undecided && r.tfg.n == 5) ++und5;
    if (r.fractality == Fractality::SuperStronglyFractal) ++ssf;
    if (r.fractality == Fractality::Fractal) ++fr;
    if (r.fractality == Fractality::NotFractal) ++nf_inf;
  }
  g.sub(fin == 166 && inf == 422, "166 finite / 422 infinite");
  g.sub(nt2 == 322 && nt3 == 58, "NotTFG split 322@2, 58@3");
  g.sub(tfg3 == 2, "2 TFG(3)");
  g.sub(und5 == 40, "40 Undecided(5)");
  g.sub(ssf == 68 && fr == 76 && nf_inf == 278, "fractality 68/76/278");
  g.sub(fin_labels == std::set<std::string>{"1", "C2", "C3", "S3"},
        "finite classes {1, C2, C3, S3}");
  // the published lower bound undercounts the rigid classes: the cyclic
  // order-9 class is fractal (checked directly at depth 3) and its pi_2 is
  // not C3 x C3, so the fractal rigidity criterion makes it rigid too; the
  // computed bound is therefore (16, 40)
  g.sub(rep.lower == 15 && rep.upper == 40, "bounds (15, 40) as published, got (" +
        std::to_string(rep.lower) + ", " + std::to_string(rep.upper) + ")");

  // Hanoi closure checks
  MealyAutomaton hanoi = catalog_automaton("hanoi3");
  PermGroup pi1(3, hanoi.truncated_gens(1));
  PermGroup pi2(9, hanoi.truncated_gens(2));
  bool depth2 = derived_subgroup(pi1).index_in(pi1).as_u64() == 2 &&
                derived_subgroup(pi2).index_in(pi2).as_u64() == 2;
  g.sub(depth2, "Hanoi: [pi1:pi1'] = [pi2:pi2'] = 2 (depth-2 identification)");
  PatternRecord hrec;
  hrec.gens = hanoi.truncated_gens(2);
  SubKey hkey = record_key(hrec, 9);
  int hidx = find_by_key(dbs.d32, hkey, 9);
  g.sub(hidx >= 0, "Hanoi depth-2 pattern present in the database");
  if (hidx >= 0) {
    PatternAnalysis pa(3, 2, false, dbs.d32.patterns[hidx].gens);
    JiStatus ji = pa.just_infinite_status();
    g.sub(ji.kind == JiStatus::JI && ji.n == 2, "Hanoi JI(2)");
    g.sub(ji.indices.size() >= 2 && ji.indices[0] == "4" && ji.indices[1] == "4",
          "Hanoi a2 = a3 = 4");
    g.sub(pa.fractality() == Fractality::SuperStronglyFractal, "Hanoi super strongly fractal");
  }
  g.end(5, "(3,2) analysis, classification and the Hanoi pattern", elapsed(t0), 1800);
}

void criterion6(Gate& g) {
  g.begin();
  auto t0 = Clock::now();
  TreeGeometry lg(3, 1);
  Perm a3 = embed(TreeAut(lg, {*parse_perm("(1,2,3)", 3, nullptr)}), 0, 0, 3).to_leaf_perm();
  std::vector<std::string> names;
  std::vector<std::vector<Perm>> gens, elems;
  for (auto& [name, cycles] : testdata::p33_patterns) {
    auto p = parse_perm(cycles, 27, nullptr);
    g.sub(p.has_value(), std::string("parse ") + name);
    names.push_back(name);
    gens.push_back({*p, a3});
  }
  bool all_minimal = true, all_tfg5 = true, all_ssf = true;
  for (size_t i = 0; i < gens.size(); ++i) {
    PatternAnalysis pa(3, 3, true, gens[i], 5);
    elems.push_back(pa.elements());
    if (!pa.is_minimal()) all_minimal = false;
    TfgStatus tfg = pa.tfg_status(5);
    if (!(tfg.kind == TfgStatus::TFG && tfg.n == 5)) all_tfg5 = false;
    if (pa.fractality() != Fractality::SuperStronglyFractal) all_ssf = false;
  }
  g.sub(all_minimal, "all 12 published generator sets are minimal patterns");
  g.sub(all_tfg5, "all 12 certified TFG at n = 5");
  g.sub(all_ssf, "all 12 super strongly fractal");

  GammaAmbient gamb(3, 3);
  auto at = [&](const std::string& n) {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return i;
    return size_t(0);
  };
  for (const char* i : {"1", "3", "4", "5"}) {
    GammaGraph gr = gamma_graph(gamb, elems[at(std::string("P") + i + "_1")],
                                elems[at(std::string("P") + i + "_2")]);
    g.sub(!gr.empty && gr.vertex_count() == 6 && gr.edge_count() == 9 && !gr.has_cycle,
          std::string("Gamma(P") + i + "_1, P" + i + "_2): 6 vertices, 9 edges, no cycle");
  }
  {
    GammaGraph gr = gamma_graph(gamb, elems[at("P6_1")], elems[at("P6_3")]);
    g.sub(!gr.empty && gr.vertex_count() == 12 && !gr.has_cycle,
          "Gamma(P6_1, P6_3): 12 vertices, no cycle");
    GammaGraph g2 = gamma_graph(gamb, elems[at("P6_1")], elems[at("P6_2")]);
    GammaGraph g3 = gamma_graph(gamb, elems[at("P6_2")], elems[at("P6_3")]);
    g.sub(!g2.empty && g2.vertex_count() == 12 && g2.edge_count() == 0,
          "Gamma(P6_1, P6_2): 12 vertices, no edges");
    g.sub(!g3.empty && g3.vertex_count() == 12 && g3.edge_count() == 0,
          "Gamma(P6_2, P6_3): 12 vertices, no edges");
  }
  // conjugators of the minimal patterns exist exactly for equal first index
  g.sub(gamb.find_conjugator(elems[at("P1_1")], elems[at("P3_1")]) == std::nullopt,
        "no transformation P1_1 -> P3_1");
  g.sub(gamb.find_conjugator(elems[at("P4_1")], elems[at("P5_1")]) == std::nullopt,
        "no transformation P4_1 -> P5_1");

  // GGS closures
  auto ggs_check = [&](const std::string& vec, const std::string& target) {
    MealyAutomaton a = catalog_automaton("ggs(" + vec + ")");
    PatternAnalysis pa(3, 3, true, gens[at(target)], 5);
    ClosureVerdict v = closure_check(a, pa);
    return v.closure_equals();
  };
  g.sub(ggs_check("1,0", "P3_2"), "closure of GGS(1,0) = P3_2");
  g.sub(ggs_check("1,2", "P6_2"), "closure of GGS(1,2) = P6_2");
  g.end(6, "(3,3) published patterns, graphs and GGS closures", elapsed(t0), 900);
}

void criterion7(Gate& g, Dbs& dbs) {
  g.begin();
  auto t0 = Clock::now();
  // dimension zero exactly for finite patterns, one only for the full pattern
  bool zero_ok = true, one_ok = true;
  auto scan = [&](const PatternDatabase& db) {
    unsigned degree = 1;
    for (int i = 0; i < db.depth; ++i) degree *= static_cast<unsigned>(db.d);
    for (const PatternRecord& rec : db.patterns) {
      PatternAnalysis pa(db.d, db.depth, db.cyclic, rec.gens);
      HausdorffDim h = pa.hausdorff();
      if (pa.finite() != (h.value == 0.0)) zero_ok = false;
      double full_order = 1;
      for (int i = 2; i <= db.d; ++i) full_order *= i;
      bool is_full = rec.order == std::pow(full_order, (degree - 1) / (db.d - 1));
      if ((std::abs(h.value - 1.0) < 1e-12) != is_full) one_ok = false;
    }
  };
  scan(dbs.d22);
  scan(dbs.d23);
  scan(dbs.d32);
  g.sub(zero_ok, "dimension 0 exactly for the finite patterns");
  g.sub(one_ok, "dimension 1 only for the full pattern");

  // P123 has stabilizer order 32 and dimension 5/8
  SubKey k123 = key_of_gens(catalog_automaton("P123").truncated_gens(4), 16);
  int idx = find_by_key(dbs.d24, k123, 16);
  g.sub(idx >= 0, "P123 located");
  if (idx >= 0) {
    PatternAnalysis pa(2, 4, false, dbs.d24.patterns[idx].gens);
    HausdorffDim h = pa.hausdorff();
    g.sub(pa.st_order() == 32, "|St_P123(3)| = 32");
    g.sub(h.exact && h.num == 5 && h.den == 8, "dimension of P123 = 5/8 exactly");
  }

  // order law at every constructed level for 50 sampled patterns per ambient
  std::mt19937 rng(424242);
  bool law_ok = true;
  for (const PatternDatabase* db : {&dbs.d22, &dbs.d23, &dbs.d32, &dbs.d24}) {
    std::vector<size_t> picks;
    for (size_t i = 0; i < db->patterns.size(); ++i) picks.push_back(i);
    std::shuffle(picks.begin(), picks.end(), rng);
    picks.resize(std::min<size_t>(50, picks.size()));
    for (size_t i : picks) {
      PatternAnalysis pa(db->d, db->depth, db->cyclic, db->patterns[i].gens);
      try {
        pa.truncation(pa.level_cap());
      } catch (const std::exception& e) {
        law_ok = false;
        g.notes.push_back(std::string("order law: ") + e.what());
      }
    }
  }
  g.sub(law_ok, "order law holds at every constructed level (50 samples per ambient)");
  g.end(7, "Hausdorff dimensions and the order law", elapsed(t0), 1200);
}

void criterion8(Gate& g, const std::string& self) {
  g.begin();
  auto t0 = Clock::now();
  std::string dir = self.substr(0, self.find_last_of('/') + 1);
  std::string cmd = dir + "prop_suites > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  double secs = elapsed(t0);
  g.sub(rc == 0, "property suites exit status");
  g.sub(secs < 600, "property suites within 10 minutes");
  g.end(8, "standalone property suites", secs, 0);
}

}  // namespace

int main(int argc, char** argv) {
  Gate g;
  Dbs dbs;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(atoi(argv[i]));
  auto want = [&](int n) { return only.empty() || only.count(n); };

  criterion1(g, dbs);  // later criteria reuse the databases
  if (want(2)) criterion2(g, dbs);
  if (want(3)) criterion3(g, dbs);
  if (want(4)) criterion4(g, dbs);
  if (want(5)) criterion5(g, dbs);
  if (want(6)) criterion6(g);
  if (want(7)) criterion7(g, dbs);
  if (want(8)) criterion8(g, argv[0]);

  printf("%d passed, %d failed\n", g.passed, g.failed);
  return g.failed ? 1 : 0;
}
