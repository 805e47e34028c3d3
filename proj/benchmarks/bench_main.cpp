#include <benchmark/benchmark.h>

#include "magnomech/entanglement.hpp"
#include "magnomech/linalg.hpp"
#include "magnomech/sweep.hpp"

namespace {

using namespace magnomech;

struct Fixture {
  SystemParams p = baseline_params();
  DerivedParams derived = derive(p);
  DriftMatrix f = build_drift(p, derived);
  DiffusionMatrix d = build_diffusion(p, derived);
};

void BM_LyapunovSolve(benchmark::State& state) {
  const Fixture fx;
  for (auto _ : state) benchmark::DoNotOptimize(solve_lyapunov_steady(fx.f, fx.d));
}
BENCHMARK(BM_LyapunovSolve);

void BM_SymplecticEigenvalues(benchmark::State& state) {
  const Fixture fx;
  const auto gamma = solve_lyapunov_steady(fx.f, fx.d);
  for (auto _ : state) benchmark::DoNotOptimize(symplectic_eigenvalues(gamma));
}
BENCHMARK(BM_SymplecticEigenvalues);

void BM_EvaluateEntanglement(benchmark::State& state) {
  const Fixture fx;
  const auto gamma = solve_lyapunov_steady(fx.f, fx.d);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_entanglement(gamma, -1.0));
}
BENCHMARK(BM_EvaluateEntanglement);

void BM_SteadySweep(benchmark::State& state) {
  Scenario s = make_preset("fig3a");
  SweepOptions opts;
  opts.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_steady_sweep(s, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid_size(s)));
}
BENCHMARK(BM_SteadySweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
