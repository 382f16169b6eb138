#include <benchmark/benchmark.h>

#include "iegirs/beamforming.hpp"
#include "iegirs/channel.hpp"
#include "iegirs/grouping.hpp"
#include "iegirs/two_stage.hpp"

using namespace iegirs;

static void BM_LaguerreHalf(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(laguerre_half(x));
    x = x > 1e6 ? 0.0 : x * 1.3 + 0.1;
  }
}
BENCHMARK(BM_LaguerreHalf);

static void BM_UpdatePrecoder(benchmark::State& state) {
  const auto m = state.range(0);
  Rng rng(1);
  const ComplexMatrix H = standard_complex_normal(m, 4, rng);
  const std::vector<double> w(4, 1.0);
  const FPAuxiliaries aux = update_auxiliaries(H, PrecodingMatrix(standard_complex_normal(m, 4, rng), 1.0), 1.0, w);
  for (auto _ : state) benchmark::DoNotOptimize(update_precoder(aux, H, w, 0.5));
}
BENCHMARK(BM_UpdatePrecoder)->Arg(4)->Arg(16)->Arg(64);

static void BM_RunMm(benchmark::State& state) {
  const auto q = state.range(0);
  Rng rng(2);
  const ComplexMatrix A = standard_complex_normal(q, q, rng);
  const RcvSubproblem sub{A * A.adjoint(), standard_complex_normal(q, 1, rng).col(0)};
  for (auto _ : state) benchmark::DoNotOptimize(run_mm(sub, ReflectionVector::zeros(q), 50, 1e-9));
}
BENCHMARK(BM_RunMm)->Arg(4)->Arg(16)->Arg(64);

namespace {

ChannelSet scene(std::size_t n) {
  ScenarioConfig cfg;
  cfg.N = n;
  Rng rng(derive_seed(cfg.master_seed, 0));
  return build_scenario(cfg, rng);
}

}  // namespace

static void BM_SelectGroupingQp(benchmark::State& state) {
  const ChannelSet ch = scene(static_cast<std::size_t>(state.range(0)));
  const std::vector<double> w(4, 1.0);
  SolverOptions o;
  for (auto _ : state) benchmark::DoNotOptimize(select_grouping(ch, 4, w, 1e-2, o));
}
BENCHMARK(BM_SelectGroupingQp)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_TwoStageSolve(benchmark::State& state) {
  const ChannelSet ch = scene(static_cast<std::size_t>(state.range(0)));
  const std::vector<double> w(4, 1.0);
  SolverOptions o;
  for (auto _ : state) benchmark::DoNotOptimize(two_stage_solve(ch, 4, w, 1e-2, o));
}
BENCHMARK(BM_TwoStageSolve)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
