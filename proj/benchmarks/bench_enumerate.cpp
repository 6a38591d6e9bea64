#include <benchmark/benchmark.h>

#include "ftc/classify.hpp"
#include "ftc/patterns.hpp"

using namespace ftc;

// Enumeration of all minimal pattern subgroups; the published GAP timings
// are 62ms for (2,2), 0.653s for (2,3), 17.4s for (3,2) and 13m27s for (2,4).
static void BM_enumerate(benchmark::State& state) {
  int d = static_cast<int>(state.range(0));
  int depth = static_cast<int>(state.range(1));
  Ambient amb(d, depth, false);
  size_t found = 0;
  for (auto _ : state) {
    EnumerateOutcome out = enumerate_minimal_patterns(amb);
    found = out.db.patterns.size();
    benchmark::DoNotOptimize(found);
  }
  state.counters["patterns"] = static_cast<double>(found);
}
BENCHMARK(BM_enumerate)->Args({2, 2})->Args({2, 3})->Args({3, 2})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_enumerate)->Args({2, 4})->Unit(benchmark::kSecond)->Iterations(1);

static void BM_ambient_build(benchmark::State& state) {
  int d = static_cast<int>(state.range(0));
  int depth = static_cast<int>(state.range(1));
  for (auto _ : state) {
    Ambient amb(d, depth, false);
    benchmark::DoNotOptimize(amb.size());
  }
}
BENCHMARK(BM_ambient_build)->Args({2, 4})->Args({3, 2})->Unit(benchmark::kMillisecond);

static void BM_analyze_pattern(benchmark::State& state) {
  Ambient amb(3, 2, false);
  EnumerateOutcome out = enumerate_minimal_patterns(amb);
  AnalysisOptions opts;
  size_t i = 0;
  for (auto _ : state) {
    PatternReport r = analyze_pattern(out.db, i++ % out.db.patterns.size(), opts);
    benchmark::DoNotOptimize(r.order);
  }
}
BENCHMARK(BM_analyze_pattern)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
