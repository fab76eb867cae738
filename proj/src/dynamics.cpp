#include "zsph/dynamics.hpp"

#include <cmath>
#include <random>

namespace zsph {

Discretization Discretization::build(int n) { return from_basis(build_basis(Resolution(n))); }

Discretization Discretization::from_basis(BasisCache basis) {
  Discretization d;
  auto shared = std::make_shared<const BasisCache>(std::move(basis));
  d.laplace = std::make_shared<const LaplaceFactorization>(
      build_factorization(shared->resolution(), shared->generators()));
  d.basis = std::move(shared);
  return d;
}

NoiseScaling build_noise_scaling(double a, int max_degree, double nu_salt, std::optional<int> n) {
  if (!(a > 0.0)) throw Error(ErrorKind::config, "noise exponent a must be positive");
  if (max_degree < 1) throw Error(ErrorKind::config, "maximal noise degree M must be >= 1");
  if (!(nu_salt > 0.0)) throw Error(ErrorKind::config, "nu_salt must be positive");
  if (n && max_degree >= *n) {
    throw Error(ErrorKind::truncation_overflow,
                "noise degree M = " + std::to_string(max_degree) + " must be below N = " + std::to_string(*n));
  }
  NoiseScaling s;
  s.a = a;
  s.max_degree = max_degree;
  s.nu_salt = nu_salt;
  double sum = 0.0;
  for (int l = 1; l <= max_degree; ++l) sum += (2.0 * l + 1.0) * std::pow(l + 1.0, -2.0 * a);
  s.c_norm = std::sqrt(sum);
  s.alpha_by_degree.assign(static_cast<std::size_t>(max_degree + 1), 0.0);
  for (int l = 1; l <= max_degree; ++l) {
    s.alpha_by_degree[static_cast<std::size_t>(l)] = std::sqrt(2.0 * nu_salt) * std::pow(l + 1.0, -a) / s.c_norm;
  }
  return s;
}

BandedMatrix real_harmonic_field(const BasisCache& basis, int l, int m) {
  const int n = basis.size();
  const int am = m < 0 ? -m : m;
  const auto t = basis.diagonal(l, am);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(t.size()));
  for (std::size_t k = 0; k < t.size(); ++k) v[static_cast<Eigen::Index>(k)] = t[k];
  const Complex i(0.0, 1.0);
  BandedMatrix x(n);
  if (m == 0) {
    x.add_diagonal(0, i * v);
  } else if (m > 0) {
    // i (T + T^T) / sqrt(2)
    x.add_diagonal(am, i * v / std::sqrt(2.0));
    x.add_diagonal(-am, i * v / std::sqrt(2.0));
  } else {
    // (T - T^T) / sqrt(2)
    x.add_diagonal(am, v / std::sqrt(2.0));
    x.add_diagonal(-am, -v / std::sqrt(2.0));
  }
  return x;
}

std::vector<NoiseMode> build_noise_modes(const BasisCache& basis, const NoiseScaling& scaling) {
  if (scaling.max_degree >= basis.size()) {
    throw Error(ErrorKind::truncation_overflow, "noise degree exceeds N-1");
  }
  std::vector<NoiseMode> modes;
  modes.reserve(static_cast<std::size_t>(scaling.mode_count()));
  for (int l = 1; l <= scaling.max_degree; ++l) {
    for (int m = -l; m <= l; ++m) modes.push_back({l, m, scaling.alpha(l), real_harmonic_field(basis, l, m)});
  }
  return modes;
}

NideOperator::NideOperator(NideSpec spec, const Discretization& disc) : spec_(std::move(spec)), disc_(disc) {
  if (const auto* p = std::get_if<PowerLawNide>(&spec_)) modes_ = build_noise_modes(*disc_.basis, p->scaling);
  if (const auto* c = std::get_if<CustomNide>(&spec_)) {
    for (const auto& [x, coeff] : c->terms) {
      if (x.rows() != disc_.n() || x.cols() != disc_.n()) throw Error(ErrorKind::shape, "custom NIDE field size");
    }
  }
}

Matrix NideOperator::apply(const Matrix& w) const {
  const double scale = 1.0 / (2.0 * disc_.hbar() * disc_.hbar());
  Matrix out = Matrix::Zero(w.rows(), w.cols());
  if (std::holds_alternative<PowerLawNide>(spec_)) {
    for (const auto& mode : modes_) {
      if (mode.alpha == 0.0) continue;
      out += (mode.alpha * mode.alpha) * mode.field.commutator(mode.field.commutator(w));
    }
  } else if (std::holds_alternative<AvmNide>(spec_)) {
    const Matrix psi = std::sqrt(2.0) * solve_stream(w, *disc_.laplace);
    out = commutator(psi, commutator(psi, w));
  } else {
    for (const auto& [x, coeff] : std::get<CustomNide>(spec_).terms) {
      if (coeff == 0.0) continue;
      out += (coeff * coeff) * commutator(x, commutator(x, w));
    }
  }
  return scale * out;
}

double NideOperator::spectral_radius(const Matrix& w, int iterations) const {
  if (!is_linear()) {
    // |[P, [P, X]]| <= 4 |P|_2^2 |X|, using the Frobenius norm as a bound on |P|_2.
    const Matrix p = std::sqrt(2.0) * solve_stream(w, *disc_.laplace);
    return 4.0 * p.squaredNorm() / (2.0 * disc_.hbar() * disc_.hbar());
  }
  const int n = disc_.n();
  std::mt19937_64 gen(0x5eed);
  std::normal_distribution<double> normal;
  Matrix x(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) x(i, j) = Complex(normal(gen), normal(gen));
  }
  x = skew_part(x);
  x.diagonal().array() -= x.trace() / static_cast<double>(n);
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const double norm = x.norm();
    if (norm == 0.0) return 0.0;
    x /= norm;
    Matrix y = apply(x);
    estimate = y.norm();
    x = std::move(y);
  }
  return estimate;
}

Matrix apply_nide(const Matrix& w, const NideSpec& spec, const Discretization& disc) {
  return NideOperator(spec, disc).apply(w);
}

Matrix hamiltonian_rhs(const Matrix& w, const LaplaceFactorization& fact) {
  const Matrix p = solve_stream(w, fact);
  return -(1.0 / fact.resolution().hbar()) * commutator(p, w);
}

Matrix viscous_rhs(const Matrix& w, double nu, const SpinGenerators& gen) {
  if (nu == 0.0) return Matrix::Zero(w.rows(), w.cols());
  return nu * apply_laplacian(w, gen);
}

}  // namespace zsph
