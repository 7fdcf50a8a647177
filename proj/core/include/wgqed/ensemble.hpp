#pragma once

#include <vector>

namespace wgqed {

enum class WaveguideKind { Chiral, Bidirectional };

// N two-level atoms on a 1D waveguide. Positions are stored as dimensionless
// optical phases theta_j = k*x_j; gamma is the per-mode coupling rate and the
// unit of inverse time throughout. Coincident atoms are legal (sign(0)=0 and
// the Heaviside theta(0)=1/2 conventions keep the kernels well defined).
struct AtomEnsemble {
  std::vector<double> phases;
  double gamma = 1.0;
  WaveguideKind kind = WaveguideKind::Chiral;

  int size() const { return static_cast<int>(phases.size()); }
};

// Throws std::invalid_argument on N=0, gamma<=0, or non-finite phases/gamma.
void validate(const AtomEnsemble& ensemble);

// Equally spaced phases 0, spacing, 2*spacing, ...
AtomEnsemble uniform_ensemble(WaveguideKind kind, int n, double gamma,
                              double spacing);

}  // namespace wgqed
