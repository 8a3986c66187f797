#include <benchmark/benchmark.h>

#include <random>

#include "qfree/freeness.hpp"
#include "qfree/selftest.hpp"

using namespace qfree;

// uncached table builds, pattern 1*1*... of length 2m
static void BM_WeingartenTable(benchmark::State& st) {
  Flavor f = st.range(0) ? Flavor::quantum : Flavor::classical;
  auto eps = SignPattern::alternating(static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(build_table(f, eps));
}
BENCHMARK(BM_WeingartenTable)->Args({1, 2})->Args({1, 3})->Args({1, 4})->Args({0, 2})->Args({0, 3})
    ->Unit(benchmark::kMillisecond);

static void BM_LhsExactDense(benchmark::State& st) {
  DenseAlgebra alg(2);
  std::mt19937 rng(7);
  const int N = static_cast<int>(st.range(1));
  auto w = random_dense_word(alg, rng, Flavor::quantum, static_cast<int>(st.range(0)), N, 1, true);
  weingarten_table(Flavor::quantum, w.eps);
  for (auto _ : st) benchmark::DoNotOptimize(lhs_exact(alg, w));
}
BENCHMARK(BM_LhsExactDense)->Args({2, 4})->Args({2, 8})->Args({3, 4})->Args({3, 8})->Unit(benchmark::kMillisecond);

static void BM_LimitFormulaDense(benchmark::State& st) {
  DenseAlgebra alg(2);
  std::mt19937 rng(7);
  auto w = random_dense_word(alg, rng, Flavor::quantum, static_cast<int>(st.range(0)), static_cast<int>(st.range(1)),
                             1, true);
  for (auto _ : st) benchmark::DoNotOptimize(limit_formula(alg, w));
}
BENCHMARK(BM_LimitFormulaDense)->Args({2, 8})->Args({3, 8})->Unit(benchmark::kMillisecond);

// matrix-unit coefficients: cost is polynomial in N through the orbit coordinates
static void BM_Counterexample(benchmark::State& st) {
  Flavor f = st.range(0) ? Flavor::quantum : Flavor::classical;
  for (auto _ : st) benchmark::DoNotOptimize(counterexample(st.range(1), f));
}
BENCHMARK(BM_Counterexample)->Args({1, 6})->Args({1, 12})->Args({0, 6})->Args({0, 12})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
