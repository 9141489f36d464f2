#include <benchmark/benchmark.h>

#include "mmo/birthdeath.hpp"
#include "mmo/model.hpp"
#include "mmo/normalform.hpp"
#include "mmo/rng.hpp"
#include "mmo/sde.hpp"
#include "mmo/slowfast.hpp"

using namespace mmo;

static void BM_NormalTriples(benchmark::State& state) {
  const NormalTriples n(1, 0);
  std::uint64_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(n(k++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NormalTriples);

static void BM_DriftAndNoise(benchmark::State& state) {
  const auto p = reference_parameters(2.4);
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel::drift_and_noise(p, x, 0.3, 0.1));
    x = x < 0.5 ? x + 1e-9 : 0.3;
  }
}
BENCHMARK(BM_DriftAndNoise);

// Slow-scale Euler-Maruyama steps at the histogram settings.
static void BM_EmSteps(benchmark::State& state) {
  const auto p = reference_parameters(2.4);
  const NoiseParams n{1e-6, 3e-3, 3e-3};
  SimConfig cfg;
  cfg.dt = 1e-4;
  cfg.t_end = 1e-4 * static_cast<double>(state.range(0));
  cfg.initial = coexistence_equilibrium(p);
  cfg.thinning = 10;
  std::uint64_t path = 0;
  for (auto _ : state) {
    const auto out = simulate_em(p, n, cfg, PhiloxBrownian(7, path++),
                                 [](double, const State&) { return true; });
    benchmark::DoNotOptimize(out.final_state);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmSteps)->Arg(100000);

static void BM_ChainEvents(benchmark::State& state) {
  const auto p = reference_parameters(2.4);
  const auto start =
      birthdeath::DiscreteState::from_densities({0.3, 0.41454545454545455, 0.1}, {1e5, 1e5, 1e5});
  std::uint64_t stream = 0;
  std::int64_t events = 0;
  for (auto _ : state) {
    const auto r = birthdeath::simulate_chain(p, start, 1e-3, 3, stream++);
    events += r.events[0] + r.events[1] + r.events[2];
  }
  state.SetItemsProcessed(events);
}
BENCHMARK(BM_ChainEvents);

static void BM_LocateFoldedSingularity(benchmark::State& state) {
  const auto p = reference_parameters(2.3);
  for (auto _ : state) benchmark::DoNotOptimize(slowfast::locate_folded_singularity(p));
}
BENCHMARK(BM_LocateFoldedSingularity);

static void BM_NewtonFoldedSingularity(benchmark::State& state) {
  const auto p = reference_parameters(2.3);
  for (auto _ : state) benchmark::DoNotOptimize(slowfast::find_folded_singularity(p, 0.31));
}
BENCHMARK(BM_NewtonFoldedSingularity);

static void BM_VerifyNormalForm(benchmark::State& state) {
  const auto p = reference_parameters(2.3);
  const auto fs = slowfast::locate_folded_singularity(p);
  const auto k = normalform::compute_constants(p, fs, {1e-6, 1e-3, 1e-4});
  for (auto _ : state) benchmark::DoNotOptimize(normalform::verify_normal_form(k, 1e-3));
}
BENCHMARK(BM_VerifyNormalForm);

BENCHMARK_MAIN();
