#include <benchmark/benchmark.h>

#include <vector>

#include "synutil/crosstab.hpp"
#include "synutil/dataset.hpp"
#include "synutil/harness.hpp"
#include "synutil/measures.hpp"
#include "synutil/propensity.hpp"
#include "synutil/rng.hpp"
#include "synutil/sweep.hpp"

namespace {

using namespace synutil;

Variable cat(const std::string& name, int levels) {
  Variable v;
  v.name = name;
  v.kind = VarKind::categorical;
  for (int l = 0; l < levels; ++l) v.levels.push_back("l" + std::to_string(l));
  v.allow_missing = false;
  return v;
}

Dataset chain_dataset(std::size_t n, int nvars, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Variable> vars;
  std::vector<Column> cols(nvars);
  for (int v = 0; v < nvars; ++v) {
    vars.push_back(cat("v" + std::to_string(v), 2 + v % 3));
    cols[v].codes.resize(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::int32_t prev = 0;
    for (int v = 0; v < nvars; ++v) {
      const int levels = 2 + v % 3;
      prev = rng.uniform() < 0.5 ? prev % levels : static_cast<std::int32_t>(rng.index(levels));
      cols[v].codes[i] = prev;
    }
  }
  return Dataset(std::move(vars), std::move(cols));
}

CellTable random_counts(std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::int64_t> o(k), s(k);
  for (std::size_t j = 0; j < k; ++j) {
    o[j] = 1 + static_cast<std::int64_t>(rng.index(60));
    s[j] = 1 + static_cast<std::int64_t>(rng.index(60));
  }
  return table_from_counts(o, s);
}

void BM_TabUtilityAll(benchmark::State& state) {
  const CellTable table = random_counts(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tab_utility(table, all_measures()));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TabUtilityAll)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_Crosstab(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dataset orig = chain_dataset(n, 6, 2);
  const Dataset syn = chain_dataset(n, 6, 3);
  const DatasetPair p = pair(orig, syn);
  const std::vector<std::string> vars = {"v0", "v1", "v2", "v3", "v4", "v5"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(crosstab(p, vars));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Crosstab)->RangeMultiplier(4)->Range(1024, 65536)->Complexity();

void BM_CartFit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dataset orig = chain_dataset(n, 4, 4);
  const Dataset syn = chain_dataset(n, 4, 5);
  const DatasetPair p = pair(orig, syn);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_cart(p, CartParams{}, 0));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CartFit)->RangeMultiplier(4)->Range(512, 32768)->Complexity();

void BM_LogisticSaturated(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dataset orig = chain_dataset(n, 3, 6);
  const Dataset syn = chain_dataset(n, 3, 7);
  const DatasetPair p = pair(orig, syn);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_model(p, ModelSpec::logistic(3), 0));
  }
}
BENCHMARK(BM_LogisticSaturated)->RangeMultiplier(4)->Range(256, 4096);

void BM_TwoWaySweep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dataset orig = chain_dataset(n, 10, 8);
  const Dataset syn = chain_dataset(n, 10, 9);
  const DatasetPair p = pair(orig, syn);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep(p, 2, {MeasureId::pMSE}, BinningSpec{}));
  }
}
BENCHMARK(BM_TwoWaySweep)->Range(1024, 8192);

void BM_SynthCatall(benchmark::State& state) {
  const Dataset ds = chain_dataset(static_cast<std::size_t>(state.range(0)), 4, 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(synth_catall(ds, 1, 0));
  }
}
BENCHMARK(BM_SynthCatall)->Range(1024, 65536);

}  // namespace

BENCHMARK_MAIN();
