#include "wgqed/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace wgqed {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

double sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

void validate(const AtomEnsemble& ensemble) {
  if (ensemble.phases.empty())
    throw std::invalid_argument("ensemble needs at least one atom");
  if (!(ensemble.gamma > 0.0) || !std::isfinite(ensemble.gamma))
    throw std::invalid_argument("gamma must be positive and finite");
  for (double th : ensemble.phases)
    if (!std::isfinite(th)) throw std::invalid_argument("phases must be finite");
}

AtomEnsemble uniform_ensemble(WaveguideKind kind, int n, double gamma,
                              double spacing) {
  AtomEnsemble e;
  e.kind = kind;
  e.gamma = gamma;
  e.phases.resize(n > 0 ? n : 0);
  for (int j = 0; j < n; ++j) e.phases[j] = j * spacing;
  validate(e);
  return e;
}

std::complex<double> propagator(WaveguideKind kind, double theta_j,
                                double theta_l) {
  const double d = theta_j - theta_l;
  if (kind == WaveguideKind::Chiral) {
    const double step = d > 0.0 ? 1.0 : (d < 0.0 ? 0.0 : 0.5);
    return kI * std::exp(kI * d) * step;
  }
  return kI * std::exp(kI * std::abs(d));
}

KernelMatrices build_kernels(const AtomEnsemble& ensemble) {
  validate(ensemble);
  const int n = ensemble.size();
  const double g = ensemble.gamma;
  KernelMatrices k;
  k.J.resize(n, n);
  k.Gamma.resize(n, n);

  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      const double d = ensemble.phases[j] - ensemble.phases[l];
      if (ensemble.kind == WaveguideKind::Chiral) {
        const std::complex<double> phase = std::exp(kI * d);
        k.J(j, l) = (g / (2.0 * kI)) * sign(d) * phase;
        k.Gamma(j, l) = g * phase;
      } else {
        k.J(j, l) = g * std::sin(std::abs(d));
        k.Gamma(j, l) = 2.0 * g * std::cos(d);
      }
    }
  }
  k.H_eff = k.J - 0.5 * kI * k.Gamma;
  return k;
}

}  // namespace wgqed
