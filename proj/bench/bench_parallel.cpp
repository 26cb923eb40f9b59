// Serial reference vs OpenMP kernels on the pointwise loops that dominate
// verification runs.

#include "mmcurv/catalog.hpp"
#include "mmcurv/verify.hpp"
#include "mmcurv/weighted.hpp"

#include <benchmark/benchmark.h>

using namespace mmcurv;

namespace {

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecPolicy::Serial : ExecPolicy::OpenMP;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}

void BM_TorusMeanChain(benchmark::State& state) {
  const CatalogObject o = build("weighted_torus");
  const DifferentiationConfig cfg;
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mean_scalar_chain(*o.manifold, 2.0, {n, n}, cfg, policy_of(state)));
  }
  label(state);
}
BENCHMARK(BM_TorusMeanChain)->Args({0, 32})->Args({1, 32})->Args({0, 64})->Args({1, 64})
    ->Unit(benchmark::kMillisecond);

void BM_FiberEquality(benchmark::State& state) {
  const CatalogObject o = build("hopf", {{"eps", 0.5}});
  VerifyConfig vc;
  vc.policy = policy_of(state);
  vc.fiber_nodes = static_cast<int>(state.range(1));
  Point b(2);
  b << 1.0, 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_main_equality(*o.submersion, b, vc));
  }
  label(state);
}
BENCHMARK(BM_FiberEquality)->Args({0, 64})->Args({1, 64})->Unit(benchmark::kMillisecond);

void BM_SplittingBattery(benchmark::State& state) {
  const CatalogObject o = build("warped_torus");
  VerifyConfig vc;
  vc.policy = policy_of(state);
  const auto samples = submersion_sample_points(o, static_cast<std::size_t>(state.range(1)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_oneill_identity(*o.submersion, samples, vc));
  }
  label(state);
}
BENCHMARK(BM_SplittingBattery)->Args({0, 25})->Args({1, 25})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
