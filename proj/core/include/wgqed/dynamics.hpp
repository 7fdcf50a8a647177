#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wgqed/ensemble.hpp"
#include "wgqed/kernels.hpp"

namespace wgqed {

// Bright state: the collective excitation an incoming plane wave couples to,
// c_j = e^{i theta_j} / sqrt(N).
Eigen::VectorXcd bright_state(const AtomEnsemble& ensemble);

// N=2 only: the orthogonal combination (1, -e^{i(theta_2-theta_1)})/sqrt(2),
// decoupled from the incoming field. Throws std::invalid_argument for N != 2.
Eigen::VectorXcd dark_state_two_atoms(const AtomEnsemble& ensemble);

struct EvolveOptions {
  // Absolute per-component tolerance for the propagated amplitudes.
  double tol = 1e-10;
  // Eigenvector-matrix condition number beyond which the spectral path is
  // abandoned for scaling-and-squaring. The chiral H_eff has a single
  // defective eigenvalue, so hitting the fallback is the expected path there.
  double cond_threshold = 1e8;
};

// Propagates amplitudes under exp(-i H_eff t). Diagonalizes once and reuses
// the factorization for every requested time; falls back to dense matrix
// exponentials (stepped over the time grid) when the eigenvector basis is too
// ill-conditioned to deliver the requested tolerance.
class Evolver {
 public:
  explicit Evolver(Eigen::MatrixXcd h_eff, EvolveOptions opts = {});

  // State at a single time t >= 0.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& c0, double t) const;

  // States at strictly increasing times t >= 0 (stepped incrementally on the
  // fallback path, so a uniform grid costs one matrix exponential).
  std::vector<Eigen::VectorXcd> evolve(const Eigen::VectorXcd& c0,
                                       const std::vector<double>& times) const;

  bool uses_fallback() const { return fallback_; }
  double eigvec_condition() const { return cond_; }

 private:
  Eigen::MatrixXcd h_;
  Eigen::MatrixXcd v_, v_inv_;
  Eigen::VectorXcd eigvals_;
  double cond_ = 0.0;
  bool fallback_ = false;
};

// Populations along a decay. times are in units of 1/gamma when gamma=1;
// in general they are plain times and the rate enters through the ensemble.
struct DecayCurve {
  std::vector<double> times;
  std::vector<double> p_w;    // bright-state population |<W|c>|^2
  std::vector<double> p_exc;  // surviving excitation ||c||^2
  std::vector<double> p_d;    // dark-state population, filled for N=2 only
};

// Bright-state-initialized decay sampled on a strictly increasing grid of
// non-negative times.
DecayCurve simulate_decay(const AtomEnsemble& ensemble,
                          const std::vector<double>& times,
                          EvolveOptions opts = {});

struct TwoAtomPopulations {
  double rho_ww;
  double rho_dd;
};

// Closed-form bright/dark populations for two atoms on a bidirectional
// waveguide separated by d = |theta_1 - theta_2|, starting in the bright
// state. Uses Gamma = 2*gamma internally. Overflow-safe for large Gamma*t.
TwoAtomPopulations two_atom_bidirectional_analytic(double d, double gamma,
                                                   double t);

}  // namespace wgqed
