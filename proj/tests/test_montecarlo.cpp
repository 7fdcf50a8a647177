#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "wgqed/analytic.hpp"
#include "wgqed/montecarlo.hpp"

using namespace wgqed;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace

TEST_SUITE("montecarlo") {

TEST_CASE("position sampling") {
  RngStream rng(1, 0);

  SUBCASE("fixed list is returned verbatim") {
    const std::vector<double> want{0.1, -2.5, 7.0};
    const auto got = sample_positions(FixedDist{want}, 3, rng);
    CHECK(got == want);
    CHECK_THROWS_AS(sample_positions(FixedDist{want}, 4, rng), std::invalid_argument);
  }

  SUBCASE("uniform sample mean") {
    const int n = 100000;
    const auto xs = sample_positions(UniformDist{0.0, 2.0}, n, rng);
    double sum = 0.0;
    for (double x : xs) {
      CHECK(x >= 0.0);
      CHECK(x < 2.0);
      sum += x;
    }
    // 3 sigma of the mean of Uniform(0,2): 3*(hi-lo)/sqrt(12 n)
    CHECK(std::abs(sum / n - 1.0) < 3.0 * 2.0 / std::sqrt(12.0 * n));
  }

  SUBCASE("gaussian sample variance") {
    const int n = 100000;
    const double sigma = 2.0;
    const auto xs = sample_positions(GaussianDist{0.5, sigma}, n, rng);
    double sum = 0.0, sumsq = 0.0;
    for (double x : xs) {
      sum += x;
      sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean - 0.5) < 0.05);
    CHECK(std::abs(var - sigma * sigma) / (sigma * sigma) < 0.05);
  }

  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(sample_positions(UniformDist{2.0, 1.0}, 4, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_positions(GaussianDist{0.0, -1.0}, 4, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_positions(GaussianDist{0.0, 1.0}, 0, rng), std::invalid_argument);
  }
}

TEST_CASE("default realization counts") {
  CHECK(default_realizations(2) == 1000);
  CHECK(default_realizations(1) == 100);
  CHECK(default_realizations(3) == 100);
  CHECK(default_realizations(100) == 100);
}

TEST_CASE("single realization reproduces a direct run bitwise") {
  const std::vector<double> phases{0.3, 1.9, 4.4};
  const auto times = linspace(0.0, 3.0, 31);
  AtomEnsemble e{phases, 1.0, WaveguideKind::Bidirectional};
  const auto direct = simulate_decay(e, times);
  const auto avg = average_decay(WaveguideKind::Bidirectional, FixedDist{phases}, 3,
                                 1, 1.0, times, 42);
  REQUIRE(avg.m_realizations == 1);
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(avg.mean_curve.p_w[k] == direct.p_w[k]);
    CHECK(avg.mean_curve.p_exc[k] == direct.p_exc[k]);
    CHECK(avg.p_w_stderr[k] == 0.0);
  }
}

TEST_CASE("same seed gives bit-identical results across thread counts") {
  const auto times = linspace(0.0, 2.0, 21);
  MonteCarloOptions serial;
  serial.threads = 1;
  MonteCarloOptions pooled;
  pooled.threads = 4;
  const GaussianDist dist{0.0, 1000.0};
  const auto a = average_decay(WaveguideKind::Bidirectional, dist, 2, 64, 1.0, times, 7, serial);
  const auto b = average_decay(WaveguideKind::Bidirectional, dist, 2, 64, 1.0, times, 7, pooled);
  const auto c = average_decay(WaveguideKind::Bidirectional, dist, 2, 64, 1.0, times, 7, pooled);
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(a.mean_curve.p_w[k] == b.mean_curve.p_w[k]);
    CHECK(a.p_w_stderr[k] == b.p_w_stderr[k]);
    CHECK(a.mean_curve.p_exc[k] == b.mean_curve.p_exc[k]);
    CHECK(a.mean_curve.p_d[k] == b.mean_curve.p_d[k]);
    CHECK(b.mean_curve.p_w[k] == c.mean_curve.p_w[k]);
  }
}

TEST_CASE("different seeds or streams decorrelate") {
  const auto times = linspace(0.5, 2.0, 4);
  const GaussianDist dist{0.0, 1000.0};
  const auto a = average_decay(WaveguideKind::Bidirectional, dist, 2, 16, 1.0, times, 7);
  const auto b = average_decay(WaveguideKind::Bidirectional, dist, 2, 16, 1.0, times, 8);
  bool any_diff = false;
  for (std::size_t k = 0; k < times.size(); ++k)
    any_diff |= (a.mean_curve.p_w[k] != b.mean_curve.p_w[k]);
  CHECK(any_diff);
}

TEST_CASE("chiral averaging is a no-op") {
  const auto times = linspace(0.0, 6.0, 61);
  const int n = 5;
  const auto avg = average_decay(WaveguideKind::Chiral, UniformDist{0.0, 2.0 * std::numbers::pi},
                                 n, 8, 1.0, times, 11);
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(std::abs(avg.mean_curve.p_w[k] - pw_chiral_exact(n, 1.0, times[k])) <= 1e-10);
    // cancellation residue in the variance bounds the spread, not 0 exactly
    CHECK(avg.p_w_stderr[k] <= 1e-7);
  }
}

TEST_CASE("standard error decreases like one over sqrt m") {
  const auto times = linspace(0.25, 3.0, 12);
  const GaussianDist dist{0.0, 1000.0};
  const auto small = average_decay(WaveguideKind::Bidirectional, dist, 2, 150, 1.0, times, 33);
  const auto big = average_decay(WaveguideKind::Bidirectional, dist, 2, 600, 1.0, times, 33);
  double ratio_sum = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    REQUIRE(big.p_w_stderr[k] > 0.0);
    ratio_sum += small.p_w_stderr[k] / (2.0 * big.p_w_stderr[k]);
  }
  const double mean_halving_ratio = ratio_sum / static_cast<double>(times.size());
  // quadrupling m should halve the standard error; allow sampling scatter
  CHECK(mean_halving_ratio > 1.3 / 1.4142135623730951);
  CHECK(mean_halving_ratio < 1.6 / 1.4142135623730951);
}

TEST_CASE("tightly packed bidirectional ensemble is superradiant") {
  const int n = 50;
  const double kappa = 50.0;
  std::vector<double> times;
  for (int i = 0; i <= 12; ++i) times.push_back(3.0 * i / 12.0 / kappa);
  const auto avg = average_decay(WaveguideKind::Bidirectional, GaussianDist{0.0, 1e-3},
                                 n, 5, 1.0, times, 5);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK(std::abs(avg.mean_curve.p_w[k] -
                   pw_superradiant(AsymptoticParams{kappa}, times[k])) < 1e-2);
}

TEST_CASE("stored realizations match the mean they produced") {
  const auto times = linspace(0.0, 1.0, 6);
  MonteCarloOptions opts;
  opts.store_realizations = true;
  const auto avg = average_decay(WaveguideKind::Bidirectional, GaussianDist{0.0, 10.0},
                                 2, 4, 1.0, times, 9, opts);
  REQUIRE(avg.per_realization.size() == 4);
  for (std::size_t k = 0; k < times.size(); ++k) {
    double s = 0.0;
    for (const auto& c : avg.per_realization) s += c.p_w[k];
    CHECK(avg.mean_curve.p_w[k] == doctest::Approx(s / 4.0).epsilon(1e-15));
  }
}

TEST_CASE("thread count from the environment") {
  const auto times = linspace(0.0, 1.0, 5);
  const GaussianDist dist{0.0, 100.0};
  const auto reference = average_decay(WaveguideKind::Bidirectional, dist, 2, 8, 1.0, times, 3);

  REQUIRE(setenv("WGQED_THREADS", "3", 1) == 0);
  const auto via_env = average_decay(WaveguideKind::Bidirectional, dist, 2, 8, 1.0, times, 3);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK(via_env.mean_curve.p_w[k] == reference.mean_curve.p_w[k]);

  REQUIRE(setenv("WGQED_THREADS", "abc", 1) == 0);
  CHECK_THROWS_AS(average_decay(WaveguideKind::Bidirectional, dist, 2, 8, 1.0, times, 3),
                  std::invalid_argument);
  REQUIRE(setenv("WGQED_THREADS", "-2", 1) == 0);
  CHECK_THROWS_AS(average_decay(WaveguideKind::Bidirectional, dist, 2, 8, 1.0, times, 3),
                  std::invalid_argument);
  REQUIRE(unsetenv("WGQED_THREADS") == 0);

  MonteCarloOptions explicit_threads;
  explicit_threads.threads = 2;  // explicit request bypasses the environment
  REQUIRE(setenv("WGQED_THREADS", "abc", 1) == 0);
  CHECK_NOTHROW(average_decay(WaveguideKind::Bidirectional, dist, 2, 8, 1.0, times, 3,
                              explicit_threads));
  REQUIRE(unsetenv("WGQED_THREADS") == 0);
}

TEST_CASE("argument validation") {
  const auto times = linspace(0.0, 1.0, 3);
  CHECK_THROWS_AS(average_decay(WaveguideKind::Chiral, GaussianDist{0.0, 1.0}, 0, 4, 1.0, times, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(average_decay(WaveguideKind::Chiral, GaussianDist{0.0, 1.0}, 2, 0, 1.0, times, 1),
                  std::invalid_argument);
  // bad distribution parameters surface from the worker
  CHECK_THROWS_AS(average_decay(WaveguideKind::Chiral, UniformDist{1.0, 1.0}, 2, 4, 1.0, times, 1),
                  std::invalid_argument);
}

}  // TEST_SUITE
