#include <benchmark/benchmark.h>

#include <vector>

#include "elicit/family.hpp"
#include "elicit/quasimono.hpp"
#include "elicit/scoring.hpp"
#include "elicit/separator.hpp"

namespace {

using namespace elicit;

std::vector<double> labels(int n) {
  std::vector<double> y;
  for (int i = 0; i < n; ++i) y.push_back(i);
  return y;
}

void BM_SampleDistribution(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_distribution(n, rng));
}
BENCHMARK(BM_SampleDistribution)->Arg(3)->Arg(10)->Arg(50);

void BM_ExpectileEval(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto prop = PropertySpec::expectile(labels(n), 0.7);
  Rng rng(2);
  const Distribution P = sample_distribution(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(eval(prop, P));
}
BENCHMARK(BM_ExpectileEval)->Arg(3)->Arg(10)->Arg(50);

void BM_SeparateMean(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto prop = PropertySpec::mean(labels(n));
  const double r = 0.4 * (n - 1);
  for (auto _ : state) benchmark::DoNotOptimize(separate(prop, r));
}
BENCHMARK(BM_SeparateMean)->Arg(2)->Arg(6)->Arg(20);

void BM_SeparateExpectile(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto prop = PropertySpec::expectile(labels(n), 0.3);
  const double r = 0.4 * (n - 1);
  for (auto _ : state) benchmark::DoNotOptimize(separate(prop, r));
}
BENCHMARK(BM_SeparateExpectile)->Arg(2)->Arg(6)->Arg(20);

void BM_BuildFamily(benchmark::State& state) {
  const auto prop = PropertySpec::expectile(labels(4), 0.6);
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_family(prop, grid));
}
BENCHMARK(BM_BuildFamily)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SynthesizeAndConsistency(benchmark::State& state) {
  const auto prop = PropertySpec::mean(labels(4));
  const SeparatingFamily fam = build_family(prop, 64);
  for (auto _ : state) {
    const ScoringRule rule = synthesize(fam);
    benchmark::DoNotOptimize(consistency_check(rule, prop, 100, 3));
  }
}
BENCHMARK(BM_SynthesizeAndConsistency)->Unit(benchmark::kMillisecond);

void BM_QuasiMonotoneVariance(benchmark::State& state) {
  const auto prop = PropertySpec::variance(labels(4));
  for (auto _ : state) benchmark::DoNotOptimize(check_quasi_monotone(prop, 200, 17, 4));
}
BENCHMARK(BM_QuasiMonotoneVariance)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
