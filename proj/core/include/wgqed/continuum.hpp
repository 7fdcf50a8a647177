#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "wgqed/dynamics.hpp"
#include "wgqed/ensemble.hpp"

namespace wgqed {

// Continuum-limit atomic density n(x) with \int n dx = total (the atom
// number N behind kappa = N*gamma).
struct UniformProfile {
  double sigma_phase;  // support [0, k*sigma]
};
struct GaussianDensity {
  double sigma_phase;  // standard deviation in phase units
};
struct DensityProfile {
  std::variant<UniformProfile, GaussianDensity> shape;
  double total;
};

// x_grid spacing is uniform; t_grid starts at 0. psi is stored column-major
// in time: psi[k] is the field over x_grid at t_grid[k].
struct ContinuumField {
  std::vector<double> x_grid;
  std::vector<double> t_grid;
  std::vector<std::vector<std::complex<double>>> psi;
  std::vector<double> density;  // n(x_j) after discrete renormalization
  std::vector<double> weights;  // trapezoid weights, sum(w*n) = total exactly
};

// Integrates d/dt psi(x) = -gamma * integral dy K(x-y) n(y) psi(y) from the
// plane-wave initial condition psi(x,0) = e^{ix}, with K the bidirectional
// kernel e^{i|x-y|} or (for cross-checks) the forward-only chiral kernel.
// Trapezoid quadrature in x with prefix sums (O(Z) per evaluation), classical
// RK4 in t with substeps bounded by kappa*dt <= 0.025.
// Throws std::invalid_argument for non-uniform/under-resolved grids (spacing
// > 0.5 phase units), t_grid not starting at 0, or bad profiles.
ContinuumField solve_continuum(const DensityProfile& profile, double gamma,
                               const std::vector<double>& x_grid,
                               const std::vector<double>& t_grid,
                               WaveguideKind kind);

// Closed-form bidirectional field over a uniform profile on [0, sigma]:
// psi(x,t) = e^{ix} J_0(2 sqrt(kappa t x / sigma)). Domain 0 <= x <= sigma,
// t >= 0; violations throw std::invalid_argument.
std::complex<double> analytic_continuum_field(double x, double t, double kappa,
                                              double sigma_phase);

// P_W(t) = |(1/total) * integral dx n(x) e^{-ix} psi(x,t)|^2 with the same
// quadrature weights the solver used.
DecayCurve pw_from_field(const ContinuumField& field,
                         const DensityProfile& profile);

}  // namespace wgqed
