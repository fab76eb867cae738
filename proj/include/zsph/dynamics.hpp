#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "zsph/laplacian.hpp"

namespace zsph {

/// Everything that depends only on N: the basis and the Laplacian
/// factorization, shared read-only between trajectories.
struct Discretization {
  std::shared_ptr<const BasisCache> basis;
  std::shared_ptr<const LaplaceFactorization> laplace;

  static Discretization build(int n);
  static Discretization from_basis(BasisCache basis);

  int n() const { return basis->size(); }
  double hbar() const { return basis->resolution().hbar(); }
  const SpinGenerators& generators() const { return basis->generators(); }
};

/// Power-law noise amplitudes alpha_lm = sqrt(2 nu_salt) c_l / |c|, with
/// c_l = (l+1)^-a for l = 1..M. The amplitude depends on l only.
struct NoiseScaling {
  double a = 1.0;
  int max_degree = 1;
  double nu_salt = 0.5;
  double c_norm = 0.0;
  std::vector<double> alpha_by_degree;  // index l; entry 0 unused

  double alpha(int l) const { return alpha_by_degree[static_cast<std::size_t>(l)]; }
  int mode_count() const { return max_degree * (max_degree + 2); }
};

/// Throws truncation-overflow when `n` is given and M >= n.
NoiseScaling build_noise_scaling(double a, int max_degree, double nu_salt, std::optional<int> n = std::nullopt);

/// One transport-noise stream field: the skew-Hermitian matrix of the real
/// spherical harmonic of degree l and order m (cosine type for m > 0, sine
/// type for m < 0), built from T_{l,|m|} and its transpose.
struct NoiseMode {
  int l = 0;
  int m = 0;
  double alpha = 0.0;
  BandedMatrix field;
};

/// Modes ordered l = 1..M, m = -l..l; this order is also the draw order.
std::vector<NoiseMode> build_noise_modes(const BasisCache& basis, const NoiseScaling& scaling);
BandedMatrix real_harmonic_field(const BasisCache& basis, int l, int m);

struct PowerLawNide {
  NoiseScaling scaling;
};
struct AvmNide {};
struct CustomNide {
  std::vector<std::pair<Matrix, double>> terms;  // (stream field, coefficient)
};
using NideSpec = std::variant<PowerLawNide, AvmNide, CustomNide>;

/// Noise-induced dissipation operator (1 / 2 hbar^2) sum_k alpha_k^2 [X_k, [X_k, W]].
/// For AVM the single stream field is sqrt(2) P with P the stream matrix of W.
class NideOperator {
 public:
  NideOperator(NideSpec spec, const Discretization& disc);

  Matrix apply(const Matrix& w) const;
  const NideSpec& spec() const { return spec_; }
  bool is_linear() const { return !std::holds_alternative<AvmNide>(spec_); }

  /// Power-iteration estimate of the largest |eigenvalue| of a linear
  /// operator, or a norm bound of the AVM operator frozen at `w`.
  double spectral_radius(const Matrix& w, int iterations = 60) const;

 private:
  NideSpec spec_;
  Discretization disc_;
  std::vector<NoiseMode> modes_;
};

Matrix apply_nide(const Matrix& w, const NideSpec& spec, const Discretization& disc);

/// -(1/hbar) [P, W] with P = solve_stream(W).
Matrix hamiltonian_rhs(const Matrix& w, const LaplaceFactorization& fact);

/// nu * Laplacian(W).
Matrix viscous_rhs(const Matrix& w, double nu, const SpinGenerators& gen);

}  // namespace zsph
