#include "zsph/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace zsph {

double energy(const Matrix& w, const LaplaceFactorization& fact) {
  const Matrix p = solve_stream(w, fact);
  return -0.5 * (p.adjoint() * w).trace().real();
}

double enstrophy(const Matrix& w) { return w.squaredNorm(); }

std::vector<double> casimirs(const Matrix& w, int kmax) {
  if (kmax < 2) throw Error(ErrorKind::config, "kmax must be >= 2");
  std::vector<double> out;
  Matrix power = w;
  for (int k = 2; k <= kmax; ++k) {
    power = power * w;
    const Complex tr = power.trace();
    out.push_back(k % 2 == 0 ? tr.real() : tr.imag());
  }
  return out;
}

Eigen::VectorXd spectrum(const Matrix& w) {
  // W = i H with H = -i W Hermitian.
  const Matrix h = skew_part(w) * Complex(0.0, -1.0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

double spectrum_drift(const Eigen::VectorXd& current, const Eigen::VectorXd& reference) {
  if (current.size() != reference.size()) throw Error(ErrorKind::shape, "spectra differ in length");
  const double radius = reference.cwiseAbs().maxCoeff();
  const double diff = (current - reference).cwiseAbs().maxCoeff();
  return radius > 0.0 ? diff / radius : diff;
}

double casimir_drift(double current, double reference, const Eigen::VectorXd& reference_spectrum, int k) {
  const double scale = reference_spectrum.cwiseAbs().array().pow(k).sum();
  return scale > 0.0 ? std::abs(current - reference) / scale : std::abs(current - reference);
}

NideRates nide_rates(const Matrix& w, const NideOperator& op, const LaplaceFactorization& fact) {
  const Matrix lw = op.apply(w);
  const Matrix p = solve_stream(w, fact);
  NideRates r;
  r.enstrophy_rate = 2.0 * (w.adjoint() * lw).trace().real();
  r.energy_rate = -(p.adjoint() * lw).trace().real();
  return r;
}

const char* to_string(NoiseRegime regime) {
  return regime == NoiseRegime::vanishing ? "vanishing" : "non-vanishing";
}

ScalingNorms scaling_norms(double a, int max_degree, double nu_salt) {
  const NoiseScaling s = build_noise_scaling(a, max_degree, nu_salt);
  ScalingNorms out;
  out.c_l2 = s.c_norm;
  out.alpha_inf = std::sqrt(2.0 * nu_salt) / s.c_norm;
  out.regime = a <= 1.0 ? NoiseRegime::vanishing : NoiseRegime::non_vanishing;
  return out;
}

double matched_viscosity(const Matrix& w, const NideOperator& op, const Discretization& disc) {
  const double nide_rate = nide_rates(w, op, *disc.laplace).energy_rate;
  // For dW/dt = nu Lap(W) the energy rate is -nu |W|^2.
  const double unit_rate = -w.squaredNorm();
  return unit_rate != 0.0 ? nide_rate / unit_rate : 0.0;
}

DiagnosticsSample sample_diagnostics(double t, const Matrix& w, const LaplaceFactorization& fact,
                                     const Eigen::VectorXd& reference_spectrum) {
  DiagnosticsSample s;
  s.t = t;
  s.energy = energy(w, fact);
  s.enstrophy = enstrophy(w);
  s.casimirs = casimirs(w, 4);
  s.spectrum_drift = spectrum_drift(spectrum(w), reference_spectrum);
  return s;
}

}  // namespace zsph
