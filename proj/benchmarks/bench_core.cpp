#include <benchmark/benchmark.h>

#include "abflow/ab_annulus.hpp"
#include "abflow/madelung.hpp"
#include "abflow/nelson.hpp"
#include "abflow/numerics/special_functions.hpp"

namespace {

using namespace abflow;

void BM_BesselSeries(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(numerics::bessel_j(0.5, x));
    x = x < 14.0 ? x + 0.37 : 0.1;
  }
}
BENCHMARK(BM_BesselSeries);

void BM_BesselLargeArgument(benchmark::State& state) {
  double x = 20.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(numerics::bessel_j(2.3, x));
    x = x < 900.0 ? x + 13.1 : 20.0;
  }
}
BENCHMARK(BM_BesselLargeArgument);

void BM_BesselZero(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(numerics::bessel_j_zero(0.37, n));
}
BENCHMARK(BM_BesselZero)->Arg(1)->Arg(10)->Arg(50);

void BM_AiryAi(benchmark::State& state) {
  double x = -30.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(numerics::airy_ai(x));
    x = x < 15.0 ? x + 0.71 : -30.0;
  }
}
BENCHMARK(BM_AiryAi);

void BM_Eigenstate(benchmark::State& state) {
  AnnulusConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(annulus::eigenstate(cfg, 1, static_cast<int>(state.range(0))).norm);
}
BENCHMARK(BM_Eigenstate)->Arg(1)->Arg(3);

void BM_Decompose(benchmark::State& state) {
  AnnulusConfig cfg;
  const auto s = annulus::eigenstate(cfg, 1, 1);
  const auto psi = s.wavefield();
  const auto A = annulus::vector_potential_spec(cfg);
  const Vec2 p = from_polar(2.0, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(psi, A, cfg.constants, p));
}
BENCHMARK(BM_Decompose);

void BM_SdeSteps(benchmark::State& state) {
  AnnulusConfig cfg;
  const auto s = annulus::eigenstate(cfg, 1, 1);
  const auto psi = s.wavefield();
  const nelson::RadialTarget target([&](double r) { return s.radial.density(r); }, cfg.a, cfg.b);
  nelson::SdeConfig sde;
  sde.steps = state.range(0);
  sde.n_trajectories = 1;
  for (auto _ : state) benchmark::DoNotOptimize(nelson::simulate(psi, cfg, sde, target, 1));
  state.SetItemsProcessed(state.iterations() * sde.steps);
}
BENCHMARK(BM_SdeSteps)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
