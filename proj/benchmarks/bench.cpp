#include <benchmark/benchmark.h>

#include <vector>

#include "wgqed/analytic.hpp"
#include "wgqed/continuum.hpp"
#include "wgqed/dynamics.hpp"
#include "wgqed/kernels.hpp"
#include "wgqed/rng.hpp"

using namespace wgqed;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

void bm_build_kernels(benchmark::State& state) {
  const auto e = uniform_ensemble(WaveguideKind::Bidirectional,
                                  static_cast<int>(state.range(0)), 1.0, 1.0);
  for (auto _ : state) {
    auto k = build_kernels(e);
    benchmark::DoNotOptimize(k.H_eff);
  }
}
BENCHMARK(bm_build_kernels)->Arg(10)->Arg(100)->Arg(1000);

void bm_evolver_setup(benchmark::State& state) {
  const auto k = build_kernels(uniform_ensemble(WaveguideKind::Bidirectional,
                                                static_cast<int>(state.range(0)), 1.0, 1.0));
  for (auto _ : state) {
    Evolver ev(k.H_eff);
    benchmark::DoNotOptimize(ev.uses_fallback());
  }
}
BENCHMARK(bm_evolver_setup)->Arg(10)->Arg(100);

void bm_decay_curve_spectral(benchmark::State& state) {
  const auto e = uniform_ensemble(WaveguideKind::Bidirectional,
                                  static_cast<int>(state.range(0)), 1.0, 1.0);
  const auto times = linspace(0.0, 10.0, 101);
  for (auto _ : state) {
    auto curve = simulate_decay(e, times);
    benchmark::DoNotOptimize(curve.p_w);
  }
}
BENCHMARK(bm_decay_curve_spectral)->Arg(10)->Arg(100);

void bm_decay_curve_defective(benchmark::State& state) {
  // the chiral kernel is non-diagonalizable, forcing the stepped expm path
  const auto e = uniform_ensemble(WaveguideKind::Chiral,
                                  static_cast<int>(state.range(0)), 1.0, 1.0);
  const auto times = linspace(0.0, 10.0, 101);
  for (auto _ : state) {
    auto curve = simulate_decay(e, times);
    benchmark::DoNotOptimize(curve.p_w);
  }
}
BENCHMARK(bm_decay_curve_defective)->Arg(10)->Arg(50);

void bm_pw_chiral_exact(benchmark::State& state) {
  const long n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(pw_chiral_exact(n, 1.0 / n, 10.0 * n));
}
BENCHMARK(bm_pw_chiral_exact)->Arg(100)->Arg(10000);

void bm_laguerre(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(laguerre_gen(state.range(0), 1, 5.0));
}
BENCHMARK(bm_laguerre)->Arg(100)->Arg(10000);

void bm_bessel_j1(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-3;
    benchmark::DoNotOptimize(bessel_j1(x));
  }
}
BENCHMARK(bm_bessel_j1);

void bm_continuum_segment(benchmark::State& state) {
  const double sigma = static_cast<double>(state.range(0));
  const DensityProfile profile{UniformProfile{sigma}, sigma};
  std::vector<double> x;
  for (double v = 0.0; v <= sigma + 1e-9; v += 0.1) x.push_back(v);
  const std::vector<double> t{0.0, 0.1};
  for (auto _ : state) {
    auto field = solve_continuum(profile, 1.0 / sigma, x, t, WaveguideKind::Bidirectional);
    benchmark::DoNotOptimize(field.psi);
  }
}
BENCHMARK(bm_continuum_segment)->Arg(200)->Arg(2000);

void bm_philox_block(benchmark::State& state) {
  std::array<std::uint64_t, 4> counter{0, 0, 0, 0};
  const std::array<std::uint64_t, 2> key{42, 0};
  for (auto _ : state) {
    ++counter[0];
    benchmark::DoNotOptimize(philox4x64(counter, key));
  }
}
BENCHMARK(bm_philox_block);

}  // namespace

BENCHMARK_MAIN();
