#include <benchmark/benchmark.h>

#include "semigap/semigap.hpp"

using namespace semigap;

namespace {

EstimatorSetup setup_from(const std::string& ini, int workers) {
  EstimatorSetup s = build_setup(parse_config(ini));
  s.workers = workers;
  return s;
}

void BM_SqrtDriftGapCurve(benchmark::State& state) {
  const EstimatorSetup s = setup_from("problem = sqrt-drift\n", static_cast<int>(state.range(0)));
  const std::vector<double> rho = geometric_ladder(0.25, 7);
  for (auto _ : state) benchmark::DoNotOptimize(gap_curve(s, rho, Tolerances{}));
}
BENCHMARK(BM_SqrtDriftGapCurve)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_HeatStability(benchmark::State& state) {
  const EstimatorSetup s = setup_from("problem = heat\n[ladders]\ndepth = 4\n", static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_stability(s));
}
BENCHMARK(BM_HeatStability)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_RiccatiLocalStability(benchmark::State& state) {
  const EstimatorSetup s = setup_from("problem = riccati\n", 1);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_local_stability(s, 0.1));
}
BENCHMARK(BM_RiccatiLocalStability)->Unit(benchmark::kMillisecond);

void BM_FtcsPowerNorm(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Method m = ftcs_heat(n);
  const double dx = 1.0 / static_cast<double>(n + 1);
  const NormSpec l2{NormKind::weighted_l2, dx, n};
  for (auto _ : state) benchmark::DoNotOptimize(linear_power_norm(m, 0.5 * dx * dx, 100, l2, n));
}
BENCHMARK(BM_FtcsPowerNorm)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
