#include <benchmark/benchmark.h>

#include <random>

#include "thinplate/film3d.hpp"
#include "thinplate/membrane.hpp"
#include "thinplate/plate.hpp"
#include "thinplate/reduction.hpp"

using namespace thinplate;

namespace {

void BM_EvalRescaled(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid3 g(Grid2(1, 1, n, n), 4);
  FilmParams p;
  p.h = 0.125;
  p.pi = 1.0;
  Deformation3 y = identity_deformation(g, p.h);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  for (double& c : y.y) c += p.h * u(rng);
  std::vector<double> grad(y.y.size());
  for (auto _ : state) benchmark::DoNotOptimize(eval_rescaled(y, p, grad));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.cells()));
}
BENCHMARK(BM_EvalRescaled)->Arg(16)->Arg(64);

void BM_EvalEvkPi(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid2 g(1, 1, n, n);
  const LimitFunctionalSpec spec = LimitFunctionalSpec::make(Regime::VonKarman, 1.0, QuadForm3::isotropic(1, 1));
  PlateState s(g);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (double& d : s.dofs) d = u(rng);
  std::vector<double> grad(s.dofs.size());
  for (auto _ : state) benchmark::DoNotOptimize(eval_evk_pi(s, spec, grad));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.nodes()));
}
BENCHMARK(BM_EvalEvkPi)->Arg(32)->Arg(128);

void BM_Q2PiValue(benchmark::State& state) {
  const QuadForm3 q3 = QuadForm3::isotropic(1, 1);
  const Mat2Sym g{0.3, -0.1, 0.2};
  for (auto _ : state) benchmark::DoNotOptimize(q2pi_value(q3, 1.0, g));
}
BENCHMARK(BM_Q2PiValue);

void BM_ConvexEnvelope(benchmark::State& state) {
  const RadialProfile p = make_radial_profile(1.0, 1e-3, 1e6, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(convex_envelope_1d(p));
}
BENCHMARK(BM_ConvexEnvelope)->Arg(4000)->Arg(40000);

}  // namespace
BENCHMARK_MAIN();
