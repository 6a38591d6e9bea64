#pragma once

#include <string>
#include <vector>

#include "ftc/gamma.hpp"
#include "ftc/patterns.hpp"

namespace ftc {

struct AnalysisOptions {
  int level_cap = 0;  // 0 picks depth+3
  uint64_t element_bound = 10000000;
  int workers = 1;
};

struct PatternReport {
  size_t index = 0;
  uint64_t order = 1;
  bool finite = true;
  std::string finite_label;  // abstract structure when finite
  HausdorffDim hausdorff;
  TfgStatus tfg;
  JiStatus ji;
  Fractality fractality = Fractality::NotFractal;
  LevelTransitivity lt;
  uint64_t ktilde_order = 1, ktilde_index = 1;
  bool ktilde_normal = true;
  RigidityStatus rigidity;
  bool p_group = false;
  uint64_t p = 0;
  bool wp_contained = false;
};

PatternReport analyze_pattern(const PatternDatabase& db, size_t index,
                              const AnalysisOptions& opts = {});
std::vector<PatternReport> analyze_all(const PatternDatabase& db,
                                       const AnalysisOptions& opts = {});

struct ClassificationReport {
  std::vector<PatternReport> reports;
  bool restricted_tfg = false;

  struct FiniteClass {
    std::string label;
    std::vector<size_t> members;
  };
  std::vector<FiniteClass> finite_classes;

  struct InfiniteClass {
    std::vector<size_t> members;  // pattern indices merged by gamma cycles
    bool has_rigid = false;
    bool pro_p = false;
  };
  std::vector<InfiniteClass> infinite_classes;

  uint64_t upper = 0, lower = 0;
};

// finite patterns grouped by abstract isomorphism, infinite ones merged by
// conjugation witnesses; the lower bound counts rigid classes inside the
// pro-p / non-pro-p buckets
ClassificationReport classify(const PatternDatabase& db, const AnalysisOptions& opts = {},
                              bool tfg_only = false);

}  // namespace ftc
