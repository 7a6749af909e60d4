#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "pxflow/constitutive.hpp"
#include "pxflow/exponent_space.hpp"
#include "pxflow/solver.hpp"
#include "pxflow/spectral.hpp"

namespace {

using namespace pxflow;

Grid cube(int dim, int n) { return Grid::cube(dim, n, 64.0); }

ExponentSpec bump() { return BumpExponent{2.3, 0.3, 16.0, std::nullopt}; }

VectorField noise(const Grid& g, double amplitude) {
  SimConfig cfg;
  cfg.grid = g;
  cfg.seed = 3;
  cfg.initial = RandomSpectrumInit{0.0, std::sqrt(2.0), amplitude};
  return make_initial_data(cfg);
}

void BM_ForwardTransform(benchmark::State& state) {
  const Grid g = cube(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  std::vector<double> in(g.size());
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = std::sin(0.01 * static_cast<double>(i));
  std::vector<Complex> out(g.size());
  for (auto _ : state) {
    forward_transform(g, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_ForwardTransform)->Args({2, 256})->Args({2, 512})->Args({3, 32})->Args({3, 64});

void BM_NonlinearTerm(benchmark::State& state) {
  const Grid g = cube(3, static_cast<int>(state.range(0)));
  SimConfig cfg;
  cfg.grid = g;
  cfg.exponent = bump();
  cfg.dt = 0.05;
  const auto u0 = noise(g, 3.0);
  Solver s(cfg, build_exponent_field(cfg.exponent, g), u0);
  const auto uh = to_spectral(u0);
  for (auto _ : state) {
    auto r = s.nonlinear_term(uh);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_NonlinearTerm)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& state) {
  const Grid g = cube(3, static_cast<int>(state.range(0)));
  SimConfig cfg;
  cfg.grid = g;
  cfg.exponent = bump();
  cfg.dt = 0.01;
  cfg.t_end = 1e9;
  Solver s(cfg, build_exponent_field(cfg.exponent, g), noise(g, 3.0));
  for (auto _ : state) benchmark::DoNotOptimize(s.step());
}
BENCHMARK(BM_Step)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Stress(benchmark::State& state) {
  const Grid g = cube(3, static_cast<int>(state.range(0)));
  const auto p = build_exponent_field(bump(), g);
  const auto D = symmetric_gradient(noise(g, 3.0));
  for (auto _ : state) {
    auto s = stress(D, p);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_Stress)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_LuxemburgNorm(benchmark::State& state) {
  const Grid g = cube(3, static_cast<int>(state.range(0)));
  const auto p = build_exponent_field(bump(), g);
  const auto u = noise(g, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(luxemburg_norm(u, p));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_LuxemburgNorm)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_LogHolder(benchmark::State& state) {
  const Grid g = cube(2, static_cast<int>(state.range(0)));
  const auto p = build_exponent_field(RadialLogExponent{2.2, 0.8, std::nullopt}, g);
  for (auto _ : state) benchmark::DoNotOptimize(log_holder_constants(p));
}
BENCHMARK(BM_LogHolder)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
