#pragma once

#include "wgqed/dynamics.hpp"

namespace wgqed {

// Collectively enhanced rate kappa = N*gamma, the quantity held fixed in the
// large-N limit.
struct AsymptoticParams {
  double kappa;
};

// Generalized Laguerre polynomial L_n^{(alpha)}(x) by the stable three-term
// recurrence upward in n. Throws std::invalid_argument for n > 10^6 or
// non-finite x, std::overflow_error if an intermediate leaves the
// representable range (use the asymptotic curve instead at that point).
double laguerre_gen(long n, long alpha, double x);

// Bessel functions of the first kind, order 0 and 1, for x >= 0. Absolute
// error <= 1e-12 up to x = 50 (power series below x = 9, Miller's backward
// recurrence with even-order normalization beyond).
double bessel_j0(double x);
double bessel_j1(double x);
double bessel_j(int order, double x);  // order in {0, 1}

// Exact chiral bright-state population
//   P_W(t) = (1/N^2) e^{-gamma t} [L_{N-1}^{(1)}(gamma t)]^2,
// evaluated with the exponential damping folded into the recurrence so large
// N and large gamma*t cannot overflow.
double pw_chiral_exact(long n, double gamma, double t);

// Large-N limit at fixed kappa: P_W(t) = [J_1(2 sqrt(kappa t))]^2 / (kappa t),
// continuous at t=0 with value 1 (series limit).
double pw_chiral_asymptotic(AsymptoticParams params, double t);

// Long-time algebraic law cos^2(2 sqrt(kappa t) - 3 pi/4) / (pi (kappa t)^{3/2}).
// Valid for kappa*t >= 1; smaller arguments are rejected.
double pw_longtime(AsymptoticParams params, double t);

// Fully collective (small-sample) limit P_W(t) = e^{-2 kappa t}.
double pw_superradiant(AsymptoticParams params, double t);

// Closed-form two-atom populations on the chiral waveguide (Gamma = gamma):
//   rho_WW = (1/4) e^{-gamma t} (gamma t - 2)^2
//   rho_DD = (1/4) e^{-gamma t} (gamma t)^2
// The squared form is the one consistent with pw_chiral_exact at N=2 and with
// the brute-force evolution; see README for the note on the unsquared variant.
TwoAtomPopulations two_atom_chiral_analytic(double gamma, double t);

}  // namespace wgqed
