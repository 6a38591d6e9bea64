#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ftc/classify.hpp"
#include "ftc/gamma.hpp"
#include "ftc/mealy.hpp"
#include "ftc/patterns.hpp"
#include "ftc/report.hpp"

using namespace ftc;

namespace {

std::string cache_dir() {
  const char* env = std::getenv("FTYPE_CACHE_DIR");
  return env ? env : ".";
}

int cmd_enumerate(int d, int depth, bool cyclic, const std::string& out_path,
                  const std::string& resume, double budget, std::string checkpoint,
                  bool quiet) {
  Ambient amb(d, depth, cyclic);
  EnumerateOptions opts;
  opts.time_budget_seconds = budget;
  if (checkpoint.empty())
    checkpoint = cache_dir() + "/enumerate_" + std::to_string(d) + "_" +
                 std::to_string(depth) + (cyclic ? "_cyclic" : "") + ".ftck";
  opts.checkpoint_path = checkpoint;
  if (!quiet) {
    opts.progress_every = 2000;
    opts.progress = [](uint64_t pops, size_t found, size_t pending) {
      std::cerr << "pops=" << pops << " found=" << found << " pending=" << pending
                << "\n";
    };
  }
  EnumerateOutcome out = resume.empty() ? enumerate_minimal_patterns(amb, opts)
                                        : resume_enumeration(amb, resume, opts);
  if (!out.finished) {
    std::cerr << "time budget exhausted; checkpoint written to " << checkpoint << "\n";
    return 1;
  }
  save_database(out.db, out_path);
  std::cout << "patterns: " << out.db.patterns.size() << "\n";
  return 0;
}

// P-names resolved by matching pattern keys against the catalog automata
std::string alias_for(const PatternDatabase& db, const SubKey& key) {
  for (const std::string& name : catalog_names()) {
    if (name[0] != 'P') continue;
    try {
      MealyAutomaton a = catalog_automaton(name);
      if (a.d() != db.d) continue;
      PatternRecord rec;
      rec.gens = a.truncated_gens(db.depth);
      if (record_key(rec, static_cast<int>(rec.gens[0].degree())) == key) return name;
    } catch (const std::exception&) {
    }
  }
  return "";
}

int cmd_analyze(const std::string& db_path, int pattern, bool json, int cap, int workers) {
  PatternDatabase db = load_database(db_path);
  AnalysisOptions opts;
  opts.level_cap = cap;
  opts.workers = workers;
  std::vector<PatternReport> reports;
  if (pattern >= 0) {
    if (static_cast<size_t>(pattern) >= db.patterns.size())
      throw std::runtime_error("pattern index out of range");
    reports.push_back(analyze_pattern(db, static_cast<size_t>(pattern), opts));
  } else {
    reports = analyze_all(db, opts);
  }
  if (json)
    std::cout << analysis_json(reports);
  else
    write_analysis_text(std::cout, reports);
  return 0;
}

int cmd_classify(const std::string& db_path, bool tfg_only, bool json, int cap,
                 int workers) {
  PatternDatabase db = load_database(db_path);
  AnalysisOptions opts;
  opts.level_cap = cap;
  opts.workers = workers;
  ClassificationReport rep = classify(db, opts, tfg_only);
  if (json)
    std::cout << classification_json(rep);
  else
    write_classification_text(std::cout, rep);
  return 0;
}

int cmd_gamma(const std::string& db_path, int pi, int qi, bool dot, bool json) {
  PatternDatabase db = load_database(db_path);
  if (pi < 0 || qi < 0 || static_cast<size_t>(pi) >= db.patterns.size() ||
      static_cast<size_t>(qi) >= db.patterns.size())
    throw std::runtime_error("pattern index out of range");
  unsigned degree = 1;
  for (int i = 0; i < db.depth; ++i) degree *= static_cast<unsigned>(db.d);
  std::vector<Perm> p = record_elements(db.patterns[pi], degree);
  std::vector<Perm> q = record_elements(db.patterns[qi], degree);
  PatternAnalysis pa(db.d, db.depth, db.cyclic, db.patterns[pi].gens);
  bool fractal = !pa.finite() && pa.fractality() != Fractality::NotFractal;
  GammaAmbient gamb(db.d, db.depth);
  ConjugacyResult cr = are_conjugate(gamb, p, q, fractal);
  const char* verdict = cr.verdict == ConjugacyVerdict::Conjugate ? "Conjugate"
                        : cr.verdict == ConjugacyVerdict::NotConjugate
                            ? "NotConjugate"
                            : "ConjugacyUnknown";
  if (dot) {
    std::cout << cr.graph.dot();
  } else if (json) {
    std::cout << "{\n  \"vertices\": " << cr.graph.vertex_count()
              << ",\n  \"edges\": " << cr.graph.edge_count()
              << ",\n  \"cycle\": " << (cr.graph.has_cycle ? "true" : "false")
              << ",\n  \"verdict\": \"" << verdict << "\"\n}\n";
  } else {
    std::cout << "vertices = " << cr.graph.vertex_count() << "\n";
    std::cout << "edges = " << cr.graph.edge_count() << "\n";
    std::cout << "cycle = " << (cr.graph.has_cycle ? "true" : "false") << "\n";
    std::cout << "verdict = " << verdict << "\n";
  }
  return cr.verdict == ConjugacyVerdict::Unknown ? 2 : 0;
}

int cmd_automaton(const std::string& source, const std::string& identify_db,
                  const std::string& probe, int depth, uint64_t kmax) {
  MealyAutomaton a = source.rfind("catalog:", 0) == 0
                         ? catalog_automaton(source.substr(8))
                         : load_mealy(source);
  int status = 0;
  std::cout << "alphabet = " << a.d() << "\n";
  std::cout << "states = " << a.state_count() << "\n";

  if (!identify_db.empty()) {
    PatternDatabase db = load_database(identify_db);
    if (db.d != a.d()) throw std::runtime_error("alphabet does not match the database");
    std::vector<Perm> gens = a.truncated_gens(db.depth);
    PermGroup tg(gens[0].degree(), gens);
    int hit = -1;
    std::string detail = "no pattern matches the truncation";
    for (size_t i = 0; i < db.patterns.size(); ++i) {
      if (BigUint(db.patterns[i].order) != tg.order()) continue;
      PatternAnalysis pa(db.d, db.depth, db.cyclic, db.patterns[i].gens);
      ClosureVerdict v = closure_check(a, pa);
      if (v.closure_equals()) {
        hit = static_cast<int>(i);
        break;
      }
      if (v.truncation_matches) {  // only one pattern matches as a point set
        detail = v.detail;
        break;
      }
    }
    if (hit >= 0) {
      std::string alias = alias_for(db, record_key(db.patterns[hit], gens[0].degree()));
      std::cout << "closure = pattern " << hit;
      if (!alias.empty()) std::cout << " (" << alias << ")";
      std::cout << "\n";
    } else {
      std::cout << "closure = inconclusive (" << detail << ")\n";
      status = 2;
    }
  }

  if (!probe.empty()) {
    GroupWord w = parse_word(probe);
    ProbeReport rep = word_section_probe(a, w, kmax, depth);
    std::cout << "probe_depth = " << rep.n_max << "\n";
    std::cout << "truncation_order = " << rep.truncation_order << "\n";
    if (rep.infinite) {
      std::cout << "infinite_order_witness = power " << rep.infinite->power << " level "
                << rep.infinite->level << " vertex " << rep.infinite->vertex + 1 << "\n";
    } else if (rep.order_within_k) {
      std::cout << "order_at_probed_depth = " << rep.truncation_order << "\n";
    } else {
      std::cout << "probe = inconclusive\n";
      status = 2;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-type pattern toolkit for groups acting on rooted trees"};
  app.require_subcommand(1);

  auto* enumerate = app.add_subcommand("enumerate", "enumerate minimal pattern subgroups");
  int d = 2, depth = 2;
  std::string ambient = "full", out_path = "patterns.ftdb", resume, checkpoint;
  double budget = 0;
  bool quiet = false;
  enumerate->add_option("-d", d, "tree arity")->required();
  enumerate->add_option("-D", depth, "pattern depth")->required();
  enumerate->add_option("--ambient", ambient, "full or cyclic")
      ->check(CLI::IsMember({"full", "cyclic"}));
  enumerate->add_option("-o,--output", out_path, "database file");
  enumerate->add_option("--resume", resume, "resume from a checkpoint");
  enumerate->add_option("--time-budget", budget, "wall clock budget in seconds");
  enumerate->add_option("--checkpoint", checkpoint, "checkpoint path on abort");
  enumerate->add_flag("--quiet", quiet, "suppress progress output");

  auto* analyze = app.add_subcommand("analyze", "analysis battery per pattern");
  std::string an_db;
  int an_pattern = -1, an_cap = 0, workers = 1;
  bool an_json = false;
  analyze->add_option("db", an_db, "pattern database")->required();
  analyze->add_option("--pattern", an_pattern, "single pattern index");
  analyze->add_flag("--json", an_json, "machine readable output");
  analyze->add_option("--cap", an_cap, "truncation level cap (default depth+3)");
  analyze->add_option("--workers", workers, "analysis worker threads");

  auto* classify_cmd = app.add_subcommand("classify", "conjugacy classification");
  std::string cl_db;
  bool cl_tfg = false, cl_json = false;
  int cl_cap = 0, cl_workers = 1;
  classify_cmd->add_option("db", cl_db, "pattern database")->required();
  classify_cmd->add_flag("--tfg-only", cl_tfg, "restrict to tfg patterns");
  classify_cmd->add_flag("--json", cl_json, "machine readable output");
  classify_cmd->add_option("--cap", cl_cap, "truncation level cap");
  classify_cmd->add_option("--workers", cl_workers, "analysis worker threads");

  auto* gamma_cmd = app.add_subcommand("gamma", "transformation graph of two patterns");
  std::string g_db;
  int g_p = -1, g_q = -1;
  bool g_dot = false, g_json = false;
  gamma_cmd->add_option("db", g_db, "pattern database")->required();
  gamma_cmd->add_option("--p", g_p, "first pattern index")->required();
  gamma_cmd->add_option("--q", g_q, "second pattern index")->required();
  gamma_cmd->add_flag("--gamma-dot", g_dot, "emit DOT text");
  gamma_cmd->add_flag("--json", g_json, "machine readable output");

  auto* automaton = app.add_subcommand("automaton", "Mealy automaton tools");
  std::string au_src, au_identify, au_probe;
  int au_depth = 0;
  uint64_t au_kmax = 64;
  automaton->add_option("source", au_src, "automaton file or catalog:<name>")->required();
  automaton->add_option("--identify", au_identify, "match the closure against a database");
  automaton->add_option("--probe", au_probe, "order probe for a word in the states");
  automaton->add_option("--depth", au_depth, "probe depth");
  automaton->add_option("--kmax", au_kmax, "largest power probed");

  auto* catalog_cmd = app.add_subcommand("catalog", "list built-in automata");

  CLI11_PARSE(app, argc, argv);

  try {
    if (enumerate->parsed())
      return cmd_enumerate(d, depth, ambient == "cyclic", out_path, resume, budget,
                           checkpoint, quiet);
    if (analyze->parsed()) return cmd_analyze(an_db, an_pattern, an_json, an_cap, workers);
    if (classify_cmd->parsed())
      return cmd_classify(cl_db, cl_tfg, cl_json, cl_cap, cl_workers);
    if (gamma_cmd->parsed()) return cmd_gamma(g_db, g_p, g_q, g_dot, g_json);
    if (automaton->parsed())
      return cmd_automaton(au_src, au_identify, au_probe, au_depth, au_kmax);
    if (catalog_cmd->parsed()) {
      for (const std::string& n : catalog_names()) std::cout << n << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
