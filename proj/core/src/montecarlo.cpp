#include "wgqed/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace wgqed {

namespace {

// Fixed-tree pairwise sum: the reduction order depends only on [lo, hi), so
// means are bit-identical however the realizations were computed.
double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

int resolve_threads(int requested, int m) {
  int t = requested;
  if (t <= 0) {
    if (const char* env = std::getenv("WGQED_THREADS")) {
      t = std::atoi(env);
      if (t <= 0) throw std::invalid_argument("WGQED_THREADS must be a positive integer");
    } else {
      t = static_cast<int>(std::thread::hardware_concurrency());
      if (t <= 0) t = 1;
    }
  }
  return std::min(t, m);
}

}  // namespace

std::vector<double> sample_positions(const PositionDistribution& dist, int n,
                                     RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_positions: n must be >= 1");
  std::vector<double> phases(n);
  if (const auto* g = std::get_if<GaussianDist>(&dist)) {
    if (!(g->sigma_phase > 0.0) || !std::isfinite(g->sigma_phase) ||
        !std::isfinite(g->mean))
      throw std::invalid_argument("Gaussian distribution needs finite mean and sigma > 0");
    for (double& p : phases) p = g->mean + g->sigma_phase * rng.normal();
  } else if (const auto* u = std::get_if<UniformDist>(&dist)) {
    if (!(u->hi > u->lo) || !std::isfinite(u->lo) || !std::isfinite(u->hi))
      throw std::invalid_argument("Uniform distribution needs finite hi > lo");
    for (double& p : phases) p = u->lo + (u->hi - u->lo) * rng.uniform();
  } else {
    const auto& f = std::get<FixedDist>(dist);
    if (static_cast<int>(f.phases.size()) != n)
      throw std::invalid_argument("Fixed distribution length does not match n");
    phases = f.phases;
  }
  return phases;
}

int default_realizations(int n) { return n == 2 ? 1000 : 100; }

AverageResult average_decay(WaveguideKind kind, const PositionDistribution& dist,
                            int n, int m, double gamma,
                            const std::vector<double>& times, std::uint64_t seed,
                            const MonteCarloOptions& opts) {
  if (n < 1) throw std::invalid_argument("average_decay: n must be >= 1");
  if (m < 1) throw std::invalid_argument("average_decay: m must be >= 1");
  const std::size_t nt = times.size();
  const bool two = n == 2;

  std::vector<DecayCurve> curves(m);
  const int threads = resolve_threads(opts.threads, m);

  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= m) return;
      try {
        RngStream rng(seed, static_cast<std::uint64_t>(r));
        AtomEnsemble e;
        e.kind = kind;
        e.gamma = gamma;
        e.phases = sample_positions(dist, n, rng);
        curves[r] = simulate_decay(e, times, opts.evolve);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  AverageResult result;
  result.m_realizations = m;
  result.seed = seed;
  result.mean_curve.times = times;
  result.mean_curve.p_w.resize(nt);
  result.mean_curve.p_exc.resize(nt);
  if (two) result.mean_curve.p_d.resize(nt);
  result.p_w_stderr.resize(nt);

  std::vector<double> column(m);
  for (std::size_t k = 0; k < nt; ++k) {
    for (int r = 0; r < m; ++r) column[r] = curves[r].p_w[k];
    const double sum = pairwise_sum(column, 0, column.size());
    const double mean = sum / m;
    result.mean_curve.p_w[k] = mean;
    if (m > 1) {
      for (int r = 0; r < m; ++r) column[r] = curves[r].p_w[k] * curves[r].p_w[k];
      const double sum2 = pairwise_sum(column, 0, column.size());
      const double var = std::max(0.0, (sum2 - sum * sum / m) / (m - 1.0));
      result.p_w_stderr[k] = std::sqrt(var / m);
    } else {
      result.p_w_stderr[k] = 0.0;
    }
    for (int r = 0; r < m; ++r) column[r] = curves[r].p_exc[k];
    result.mean_curve.p_exc[k] = pairwise_sum(column, 0, column.size()) / m;
    if (two) {
      for (int r = 0; r < m; ++r) column[r] = curves[r].p_d[k];
      result.mean_curve.p_d[k] = pairwise_sum(column, 0, column.size()) / m;
    }
  }

  if (opts.store_realizations) result.per_realization = std::move(curves);
  return result;
}

}  // namespace wgqed
