// Parallel kernels against their serial reference versions. Set
// OMP_NUM_THREADS to compare thread counts.

#include <benchmark/benchmark.h>

#include "sortition/distortion.hpp"
#include "sortition/instance.hpp"
#include "sortition/reference.hpp"
#include "sortition/selection.hpp"

using namespace sortition;

namespace {

Instance make_instance(std::size_t n, std::size_t m) {
  Rng rng(7);
  return gen_random_euclidean(n, m, 3, rng);
}

void BM_ValidateMetric(benchmark::State& state) {
  const Instance inst = make_instance(static_cast<std::size_t>(state.range(0)), 10);
  for (auto _ : state) benchmark::DoNotOptimize(validate_metric(inst.metric(), 1e-9));
}

void BM_ValidateMetricSerial(benchmark::State& state) {
  const Instance inst = make_instance(static_cast<std::size_t>(state.range(0)), 10);
  for (auto _ : state) benchmark::DoNotOptimize(reference::validate_metric(inst.metric(), 1e-9));
}

void BM_BallTrace(benchmark::State& state) {
  const Instance inst = make_instance(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(fgc_ball_trace(inst, 20));
}

void BM_BallTraceSerial(benchmark::State& state) {
  const Instance inst = make_instance(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(reference::fgc_ball_trace(inst.agents(), 20));
}

void BM_ExAnteExact(benchmark::State& state) {
  const Instance inst = make_instance(16, 40);
  const auto dist = uniform_support(16, 8);
  for (auto _ : state) benchmark::DoNotOptimize(ex_ante_exact(inst, dist));
}

void BM_ExAnteExactSerial(benchmark::State& state) {
  const Instance inst = make_instance(16, 40);
  const auto dist = uniform_support(16, 8);
  for (auto _ : state) benchmark::DoNotOptimize(reference::ex_ante_exact(inst, dist));
}

void BM_ExAnteMonteCarlo(benchmark::State& state) {
  const Instance inst = make_instance(200, 50);
  const auto sampler = fgc_sampler(fgc_ball_trace(inst, 20), 200, 20);
  for (auto _ : state) benchmark::DoNotOptimize(ex_ante_mc(inst, sampler, 20'000, 1));
}

void BM_ExAnteMonteCarloSerial(benchmark::State& state) {
  const Instance inst = make_instance(200, 50);
  const auto sampler = fgc_sampler(fgc_ball_trace(inst, 20), 200, 20);
  for (auto _ : state) benchmark::DoNotOptimize(reference::ex_ante_mc(inst, sampler, 20'000, 1));
}

}  // namespace

BENCHMARK(BM_ValidateMetric)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ValidateMetricSerial)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BallTrace)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BallTraceSerial)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExAnteExact)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExAnteExactSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExAnteMonteCarlo)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExAnteMonteCarloSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
