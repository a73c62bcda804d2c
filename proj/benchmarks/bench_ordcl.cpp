#include <benchmark/benchmark.h>

#include "ordcl/estimation.hpp"
#include "ordcl/inference.hpp"
#include "ordcl/studies.hpp"

using namespace ordcl;

namespace {

OrdinalData wine() {
  Matrix x(4, 2);
  x << 0, 0, 0, 1, 1, 0, 1, 1;
  Matrix y(4, 5);
  y << 4, 9, 5, 0, 0, 1, 7, 8, 2, 0, 0, 5, 8, 3, 2, 0, 1, 5, 7, 5;
  return OrdinalData(x, y, {"temp", "contact"});
}

ModelSpec wine_spec() {
  ModelSpec spec;
  spec.proportional_cols = {1};
  spec.partial_cols = {0};
  return spec;
}

// A larger random design: n rows, k categories, p covariates.
OrdinalData random_design(int n, int k, int p) {
  Matrix x = Matrix::Random(n, p);
  Matrix y = Matrix::Constant(n, k, 3.0);
  return OrdinalData(x, y);
}

void BM_AdjustedScore(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const OrdinalData data = random_design(n, 5, 3);
  ModelSpec spec;
  spec.proportional_cols = {0, 1, 2};
  const Model model = make_model(spec, data);
  ParamVector delta(7);
  delta << -1.0, -0.3, 0.3, 1.0, 0.2, -0.1, 0.4;
  for (auto _ : state) benchmark::DoNotOptimize(adjusted_score(model, data, delta));
  state.SetComplexityN(n);
}
BENCHMARK(BM_AdjustedScore)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oN);

void BM_WineML(benchmark::State& state) {
  const OrdinalData data = wine();
  for (auto _ : state) benchmark::DoNotOptimize(fit_ml(wine_spec(), data));
}
BENCHMARK(BM_WineML);

void BM_WineRB(benchmark::State& state) {
  const OrdinalData data = wine();
  for (auto _ : state) benchmark::DoNotOptimize(fit_rb(wine_spec(), data));
}
BENCHMARK(BM_WineRB);

void BM_WineScoreTest(benchmark::State& state) {
  const OrdinalData data = wine();
  const FitResult large = fit_rb(wine_spec(), data);
  ModelSpec common;
  common.proportional_cols = {0, 1};
  const FitResult small = fit_rb(common, data);
  const ParamVector restricted = embed(small.estimates, proportional_embedding(small, large, 0));
  const Model model = make_model(wine_spec(), data);
  for (auto _ : state) benchmark::DoNotOptimize(adjusted_score_test(model, data, restricted, 3));
}
BENCHMARK(BM_WineScoreTest);

void BM_FitTable(benchmark::State& state) {
  EnumConfig config;
  config.k = 4;
  const Table2xK table{{1, 0, 2, 0}, {0, 2, 0, 1}};
  for (auto _ : state) benchmark::DoNotOptimize(fit_table(table, config));
}
BENCHMARK(BM_FitTable);

void BM_Enumeration(benchmark::State& state) {
  EnumConfig config;
  config.k = 4;
  config.m1 = config.m2 = static_cast<int>(state.range(0));
  config.beta_grid = {-3.0, 0.0, 3.0};
  config.e_values = {1.0, 5.0};
  config.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_enumeration(config));
  state.SetItemsProcessed(state.iterations() * count_tables(4, config.m1, config.m2));
}
BENCHMARK(BM_Enumeration)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_SimulateCounts(benchmark::State& state) {
  const OrdinalData design = random_design(100, 5, 3);
  ModelSpec spec;
  spec.proportional_cols = {0, 1, 2};
  const Model model = make_model(spec, design);
  ParamVector delta(7);
  delta << -1.0, -0.3, 0.3, 1.0, 0.2, -0.1, 0.4;
  std::uint64_t rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_counts(model, design, delta, 1, rep++));
}
BENCHMARK(BM_SimulateCounts);

}  // namespace

BENCHMARK_MAIN();
