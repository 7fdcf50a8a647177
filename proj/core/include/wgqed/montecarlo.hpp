#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "wgqed/dynamics.hpp"
#include "wgqed/ensemble.hpp"
#include "wgqed/rng.hpp"

namespace wgqed {

// Random position models, all in dimensionless phase units k*x.
struct GaussianDist {
  double mean = 0.0;
  double sigma_phase;  // k*sigma > 0
};
struct UniformDist {
  double lo;
  double hi;  // hi > lo
};
struct FixedDist {
  std::vector<double> phases;  // returned verbatim; length must equal n
};
using PositionDistribution = std::variant<GaussianDist, UniformDist, FixedDist>;

// n i.i.d. phases from dist. Throws std::invalid_argument on bad parameters
// or a Fixed list whose length differs from n.
std::vector<double> sample_positions(const PositionDistribution& dist, int n,
                                     RngStream& rng);

struct AverageResult {
  DecayCurve mean_curve;
  std::vector<double> p_w_stderr;  // standard error of the mean, 0 for m=1
  int m_realizations = 0;
  std::uint64_t seed = 0;
  std::vector<DecayCurve> per_realization;  // filled only when requested
};

struct MonteCarloOptions {
  bool store_realizations = false;
  // 0 = resolve from WGQED_THREADS, falling back to the hardware count.
  int threads = 0;
  EvolveOptions evolve;
};

// Disorder-averaged decay over m independently sampled ensembles. Realization
// r draws from the stream keyed (seed, r), and means are pairwise sums over a
// fixed binary tree, so equal seeds give bit-identical results regardless of
// thread count.
AverageResult average_decay(WaveguideKind kind, const PositionDistribution& dist,
                            int n, int m, double gamma,
                            const std::vector<double>& times, std::uint64_t seed,
                            const MonteCarloOptions& opts = {});

// Scenario default: 1000 realizations for n=2, 100 otherwise.
int default_realizations(int n);

}  // namespace wgqed
