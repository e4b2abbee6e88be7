#include <benchmark/benchmark.h>

#include "pcdiff/rational.hpp"

namespace {

using pcdiff::Rational;

void BM_RationalSmallAdd(benchmark::State& state) {
  Rational a(3, 7), b(5, 11);
  for (auto _ : state) {
    Rational c = a + b;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_RationalSmallAdd);

// Chain difficulty sums leave the int64 range after a few hundred mixed-denominator terms.
void BM_RationalChainDifficultySum(benchmark::State& state) {
  const auto n = state.range(0);
  for (auto _ : state) {
    Rational sum(1);
    for (std::int64_t i = 1; i <= n; ++i) sum += Rational(1 << 20, 1 + i % 97);
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RationalChainDifficultySum)->Arg(64)->Arg(1024);

void BM_RationalCompare(benchmark::State& state) {
  Rational a = Rational::pow2(80) / Rational(3), b = Rational::pow2(80) / Rational(5);
  for (auto _ : state) benchmark::DoNotOptimize(a < b);
}
BENCHMARK(BM_RationalCompare);

}  // namespace
