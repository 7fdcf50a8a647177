#include "wgqed/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <stdexcept>

namespace wgqed {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

double norm1(const Eigen::MatrixXcd& m) {
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

void check_times(const std::vector<double>& times) {
  double prev = -1.0;
  for (double t : times) {
    if (!std::isfinite(t) || t < 0.0)
      throw std::invalid_argument("times must be finite and non-negative");
    if (t <= prev) throw std::invalid_argument("times must be strictly increasing");
    prev = t;
  }
}

}  // namespace

Eigen::VectorXcd bright_state(const AtomEnsemble& ensemble) {
  validate(ensemble);
  const int n = ensemble.size();
  Eigen::VectorXcd c(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j) c(j) = norm * std::exp(kI * ensemble.phases[j]);
  return c;
}

Eigen::VectorXcd dark_state_two_atoms(const AtomEnsemble& ensemble) {
  validate(ensemble);
  if (ensemble.size() != 2)
    throw std::invalid_argument("dark state is defined for exactly two atoms");
  const double rel = ensemble.phases[1] - ensemble.phases[0];
  Eigen::VectorXcd c(2);
  c(0) = 1.0 / std::sqrt(2.0);
  c(1) = -std::exp(kI * rel) / std::sqrt(2.0);
  return c;
}

Evolver::Evolver(Eigen::MatrixXcd h_eff, EvolveOptions opts)
    : h_(std::move(h_eff)) {
  if (h_.rows() != h_.cols() || h_.rows() < 1)
    throw std::invalid_argument("H_eff must be square and non-empty");

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h_);
  if (solver.info() == Eigen::Success) {
    Eigen::MatrixXcd v = solver.eigenvectors();
    Eigen::MatrixXcd v_inv = v.partialPivLu().inverse();
    cond_ = norm1(v) * norm1(v_inv);
    if (std::isfinite(cond_) && cond_ <= opts.cond_threshold) {
      v_ = std::move(v);
      v_inv_ = std::move(v_inv);
      eigvals_ = solver.eigenvalues();
      return;
    }
  } else {
    cond_ = std::numeric_limits<double>::infinity();
  }
  fallback_ = true;
}

Eigen::VectorXcd Evolver::apply(const Eigen::VectorXcd& c0, double t) const {
  if (c0.size() != h_.rows())
    throw std::invalid_argument("state dimension does not match H_eff");
  if (!std::isfinite(t) || t < 0.0)
    throw std::invalid_argument("time must be finite and non-negative");
  if (t == 0.0) return c0;
  if (!fallback_) {
    Eigen::VectorXcd a = v_inv_ * c0;
    a.array() *= (-kI * t * eigvals_.array()).exp();
    return v_ * a;
  }
  Eigen::MatrixXcd u = (-kI * t * h_).exp();
  return u * c0;
}

std::vector<Eigen::VectorXcd> Evolver::evolve(
    const Eigen::VectorXcd& c0, const std::vector<double>& times) const {
  if (c0.size() != h_.rows())
    throw std::invalid_argument("state dimension does not match H_eff");
  check_times(times);

  std::vector<Eigen::VectorXcd> out;
  out.reserve(times.size());

  if (!fallback_) {
    const Eigen::VectorXcd a = v_inv_ * c0;
    for (double t : times) {
      Eigen::VectorXcd at = a;
      at.array() *= (-kI * t * eigvals_.array()).exp();
      out.push_back(v_ * at);
    }
    return out;
  }

  // Step incrementally; a uniform grid reuses one exponential, other grids
  // cache per distinct step length.
  std::map<double, Eigen::MatrixXcd> step_cache;
  Eigen::VectorXcd c = c0;
  double t_prev = 0.0;
  for (double t : times) {
    const double dt = t - t_prev;
    if (dt > 0.0) {
      auto it = step_cache.find(dt);
      if (it == step_cache.end())
        it = step_cache.emplace(dt, ((-kI * dt) * h_).exp()).first;
      c = it->second * c;
    }
    out.push_back(c);
    t_prev = t;
  }
  return out;
}

DecayCurve simulate_decay(const AtomEnsemble& ensemble,
                          const std::vector<double>& times, EvolveOptions opts) {
  validate(ensemble);
  check_times(times);
  const KernelMatrices kernels = build_kernels(ensemble);
  const Evolver evolver(kernels.H_eff, opts);
  const Eigen::VectorXcd w = bright_state(ensemble);
  const bool two = ensemble.size() == 2;
  const Eigen::VectorXcd d = two ? dark_state_two_atoms(ensemble)
                                 : Eigen::VectorXcd();

  DecayCurve curve;
  curve.times = times;
  curve.p_w.reserve(times.size());
  curve.p_exc.reserve(times.size());
  if (two) curve.p_d.reserve(times.size());

  const auto states = evolver.evolve(w, times);
  for (const auto& c : states) {
    curve.p_w.push_back(std::norm(w.dot(c)));
    curve.p_exc.push_back(c.squaredNorm());
    if (two) curve.p_d.push_back(std::norm(d.dot(c)));
  }
  return curve;
}

TwoAtomPopulations two_atom_bidirectional_analytic(double d, double gamma,
                                                   double t) {
  if (!std::isfinite(d) || !std::isfinite(gamma) || !std::isfinite(t))
    throw std::invalid_argument("two_atom_bidirectional_analytic needs finite inputs");
  const double big_gamma = 2.0 * gamma;
  const std::complex<double> z = 0.5 * big_gamma * t * std::exp(kI * d);
  // e^{-Gamma t} |cosh z - cos(d) sinh z|^2 with the decay folded into the
  // exponentials: Re(z) <= Gamma t / 2 keeps both arguments non-positive.
  const std::complex<double> ep = std::exp(z - 0.5 * big_gamma * t);
  const std::complex<double> em = std::exp(-z - 0.5 * big_gamma * t);
  const std::complex<double> scaled_cosh = 0.5 * (ep + em);
  const std::complex<double> scaled_sinh = 0.5 * (ep - em);
  const double c = std::cos(d);
  const double s = std::sin(d);
  TwoAtomPopulations pops;
  pops.rho_ww = std::norm(scaled_cosh - c * scaled_sinh);
  pops.rho_dd = s * s * std::norm(scaled_sinh);
  return pops;
}

}  // namespace wgqed
