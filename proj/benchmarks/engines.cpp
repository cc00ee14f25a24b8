#include <benchmark/benchmark.h>

#include "trapnet/classical.hpp"
#include "trapnet/liouville.hpp"
#include "trapnet/observables.hpp"
#include "trapnet/star_reduced.hpp"

namespace {

trapnet::NetworkSpec star(int n, int l) {
  trapnet::NetworkSpec spec;
  spec.branches = n;
  spec.length = l;
  spec.defect = trapnet::optimal_defect(n);
  return spec;
}

void BM_FullDiagonalize(benchmark::State& state) {
  const auto spec = star(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto liouvillian = trapnet::build_liouvillian(trapnet::build_hamiltonian(spec), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(trapnet::diagonalize(liouvillian));
  state.counters["dim"] = liouvillian.dim();
}
BENCHMARK(BM_FullDiagonalize)->Args({3, 3})->Args({4, 4})->Args({5, 4})->Unit(benchmark::kMillisecond);

void BM_ReducedDiagonalize(benchmark::State& state) {
  const auto spec = star(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto generator = trapnet::build_reduced_generator(spec, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(trapnet::diagonalize(generator.matrix()));
  state.counters["dim"] = generator.dim();
}
BENCHMARK(BM_ReducedDiagonalize)->Args({3, 3})->Args({4, 4})->Args({5, 4})->Args({8, 12})
    ->Unit(benchmark::kMillisecond);

void BM_AbsorptionTime(benchmark::State& state) {
  const auto engine = static_cast<trapnet::Engine>(state.range(0));
  const auto spec = star(5, 4);
  for (auto _ : state) benchmark::DoNotOptimize(trapnet::absorption_time(spec, 0.1, engine));
}
BENCHMARK(BM_AbsorptionTime)
    ->Arg(static_cast<int>(trapnet::Engine::FullFLS))
    ->Arg(static_cast<int>(trapnet::Engine::Reduced))
    ->Arg(static_cast<int>(trapnet::Engine::Classical))
    ->Unit(benchmark::kMillisecond);

void BM_MfptThreeWay(benchmark::State& state) {
  const auto model = trapnet::build_rate_model(star(8, 10), 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trapnet::mfpt_via_inverse(model));
    benchmark::DoNotOptimize(trapnet::mfpt_via_wtd(model));
  }
}
BENCHMARK(BM_MfptThreeWay);

}  // namespace
BENCHMARK_MAIN();
