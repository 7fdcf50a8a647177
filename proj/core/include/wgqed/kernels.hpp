#pragma once

#include <Eigen/Dense>
#include <complex>

#include "wgqed/ensemble.hpp"

namespace wgqed {

// Coupling kernels of the 1D waveguide in the single-excitation sector.
// J is Hermitian (coherent photon-mediated exchange), Gamma is Hermitian and
// positive semidefinite (correlated decay), and the non-Hermitian generator
// of the dynamics is H_eff = J - (i/2) Gamma.
struct KernelMatrices {
  Eigen::MatrixXcd J;
  Eigen::MatrixXcd Gamma;
  Eigen::MatrixXcd H_eff;
};

// Single-photon propagator between phases theta_j and theta_l.
// Chiral: i * exp(i(theta_j - theta_l)) * step(theta_j - theta_l) with the
// half-convention step(0) = 1/2. Bidirectional: i * exp(i|theta_j - theta_l|).
std::complex<double> propagator(WaveguideKind kind, double theta_j,
                                double theta_l);

// Kernels for a validated ensemble:
//   Chiral:        J_jl = (gamma/2i) sign(d) e^{id},  Gamma_jl = gamma e^{id}
//   Bidirectional: J_jl = gamma sin|d|,               Gamma_jl = 2 gamma cos|d|
// with d = theta_j - theta_l and sign(0) = 0.
KernelMatrices build_kernels(const AtomEnsemble& ensemble);

}  // namespace wgqed
