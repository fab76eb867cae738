#pragma once

#include <string>
#include <vector>

#include "zsph/dynamics.hpp"

namespace zsph {

/// Kinetic energy (1/2) sum |w_lm|^2 / (l (l+1)) >= 0, evaluated as
/// -(1/2) Re Tr(P^dagger W) with P = solve_stream(W).
double energy(const Matrix& w, const LaplaceFactorization& fact);

/// |W|_F^2 = Tr(W^dagger W) = -Tr(W W) for skew-Hermitian W.
double enstrophy(const Matrix& w);

/// Tr(W^k) for k = 2..kmax: the real part for even k and the imaginary part
/// for odd k (the other part vanishes for skew-Hermitian W).
std::vector<double> casimirs(const Matrix& w, int kmax);

/// Imaginary parts of the eigenvalues of skew-Hermitian W, ascending.
Eigen::VectorXd spectrum(const Matrix& w);

/// max_i |lambda_i - lambda0_i| / max_i |lambda0_i| over sorted spectra.
double spectrum_drift(const Eigen::VectorXd& current, const Eigen::VectorXd& reference);

/// Drift of Tr(W^k) scaled by sum_i |lambda_i|^k of the reference spectrum,
/// which stays meaningful for odd k where Tr(W^k) can be close to zero.
double casimir_drift(double current, double reference, const Eigen::VectorXd& reference_spectrum, int k);

struct NideRates {
  double energy_rate = 0.0;
  double enstrophy_rate = 0.0;
};

/// Instantaneous rates along the pure dissipation flow dW/dt = Lambda W.
NideRates nide_rates(const Matrix& w, const NideOperator& op, const LaplaceFactorization& fact);

enum class NoiseRegime { vanishing, non_vanishing };
const char* to_string(NoiseRegime regime);

struct ScalingNorms {
  double c_l2 = 0.0;
  double alpha_inf = 0.0;
  NoiseRegime regime = NoiseRegime::vanishing;
};

/// |c|_l2 over degrees 1..M, alpha_inf = sqrt(2 nu_salt) / |c|_l2, and the
/// regime tag: alpha_inf -> 0 as M grows only for a <= 1.
ScalingNorms scaling_norms(double a, int max_degree, double nu_salt);

/// Viscosity whose Navier-Stokes energy decay rate at `w` equals the rate of
/// the NIDE operator; used to put the two dissipative models side by side.
double matched_viscosity(const Matrix& w, const NideOperator& op, const Discretization& disc);

struct DiagnosticsSample {
  double t = 0.0;
  double energy = 0.0;
  double enstrophy = 0.0;
  std::vector<double> casimirs;  // Tr(W^k), k = 2..4
  double spectrum_drift = 0.0;
};

DiagnosticsSample sample_diagnostics(double t, const Matrix& w, const LaplaceFactorization& fact,
                                     const Eigen::VectorXd& reference_spectrum);

}  // namespace zsph
