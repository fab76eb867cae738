#include <doctest.h>

#include "support.hpp"
#include "zsph/diagnostics.hpp"
#include "zsph/dynamics.hpp"

using namespace zsph;
using zsph::test::disc;

namespace {

double sum_alpha_squared(const NoiseScaling& s) {
  double sum = 0;
  for (int l = 1; l <= s.max_degree; ++l) sum += (2 * l + 1) * s.alpha(l) * s.alpha(l);
  return sum;
}

// -(1/2 hbar^2) sum_lm alpha_l^2 [T_lm^dagger, [T_lm, W]] from the dense complex
// basis, one term per (l, m), with no use of the real-harmonic noise fields.
Matrix nide_oracle(const Matrix& w, const NoiseScaling& s, const Discretization& d) {
  Matrix out = Matrix::Zero(w.rows(), w.cols());
  for (int l = 1; l <= s.max_degree; ++l)
    for (int m = -l; m <= l; ++m) {
      const Matrix t = d.basis->matrix(l, m);
      out -= s.alpha(l) * s.alpha(l) * commutator(t.adjoint(), commutator(t, w));
    }
  return out / (2 * d.hbar() * d.hbar());
}

}  // namespace

TEST_CASE("noise scaling: hand values") {
  const auto s = build_noise_scaling(1.0, 1, 0.5);
  CHECK(s.c_norm == doctest::Approx(0.8660254037844386).epsilon(1e-15));
  CHECK(s.alpha(1) == doctest::Approx(0.5773502691896258).epsilon(1e-15));
  CHECK(s.mode_count() == 3);
  CHECK(build_noise_scaling(1.0, 4, 0.5).mode_count() == 24);
}

TEST_CASE("noise scaling: total strength") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ua(0.1, 3.0), unu(0.01, 2.0);
  std::uniform_int_distribution<int> um(1, 300);
  for (int k = 0; k < 50; ++k) {
    const double nu = unu(rng);
    const auto s = build_noise_scaling(ua(rng), um(rng), nu);
    CHECK(zsph::test::rel(sum_alpha_squared(s), 2 * nu) <= 1e-12);
  }
}

TEST_CASE("noise scaling: a = 2 norm converges") {
  // |c|^2 grows by (2M+1)/(M+1)^4 per degree, so |c| increments fall as M^-3;
  // they drop below 1e-6 once M passes ~121.
  double prev = build_noise_scaling(2.0, 100, 0.5).c_norm;
  double prev_step = 1.0;
  for (int m = 101; m <= 400; ++m) {
    const double c = build_noise_scaling(2.0, m, 0.5).c_norm;
    const double exact = std::sqrt(prev * prev + (2.0 * m + 1.0) / std::pow(m + 1.0, 4.0)) - prev;
    CHECK(std::abs((c - prev) - exact) <= 1e-15);
    CHECK(c - prev < prev_step);
    if (m >= 122) CHECK(c - prev < 1e-6);
    prev_step = c - prev;
    prev = c;
  }
}

TEST_CASE("noise scaling: errors") {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io;
  };
  CHECK(kind_of([] { build_noise_scaling(1.0, 16, 0.5, 16); }) == ErrorKind::truncation_overflow);
  CHECK(kind_of([] { build_noise_scaling(0.0, 4, 0.5); }) == ErrorKind::config);
  CHECK(kind_of([] { build_noise_scaling(1.0, 0, 0.5); }) == ErrorKind::config);
  CHECK(kind_of([] { build_noise_scaling(1.0, 4, 0.0); }) == ErrorKind::config);
  CHECK(kind_of([] { build_noise_modes(*disc(8).basis, build_noise_scaling(1.0, 8, 0.5)); }) ==
        ErrorKind::truncation_overflow);
}

TEST_CASE("noise fields: skew-Hermitian real harmonics") {
  const int n = 10;
  const auto& d = disc(n);
  const auto modes = build_noise_modes(*d.basis, build_noise_scaling(1.0, 4, 0.5));
  REQUIRE(modes.size() == 24);
  CHECK(modes.front().l == 1);
  CHECK(modes.front().m == -1);
  for (std::size_t p = 0; p < modes.size(); ++p) {
    const Matrix x = modes[p].field.dense();
    CHECK((x + x.adjoint()).norm() < 1e-14);
    for (std::size_t q = 0; q < modes.size(); ++q) {
      const Complex g = (x.adjoint() * modes[q].field.dense()).trace();
      CHECK(std::abs(g - (p == q ? 1.0 : 0.0)) < 1e-12);
    }
    const int l = modes[p].l;
    CHECK((apply_laplacian(x, d.generators()) + double(l * (l + 1)) * x).norm() < 1e-10);
  }
}

TEST_CASE("hamiltonian bracket") {
  const int n = 16;
  const auto& d = disc(n);
  const Complex i(0, 1);
  CHECK(hamiltonian_rhs(i * d.basis->matrix(3, 1), *d.laplace).norm() < 1e-13);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 3; ++k) {
    const Matrix w = zsph::test::random_vorticity(rng, n);
    const Matrix r = hamiltonian_rhs(w, *d.laplace);
    const Matrix p = solve_stream(w, *d.laplace);
    CHECK(std::abs(r.trace()) <= 1e-12 * r.norm());
    CHECK(std::abs((w.adjoint() * r).trace()) <= 1e-10 * w.squaredNorm());
    CHECK(std::abs((p.adjoint() * r).trace()) <= 1e-10 * w.squaredNorm());
    CHECK((r + r.adjoint()).norm() <= 1e-12 * r.norm());
  }
}

TEST_CASE("scaled bracket: antisymmetry and Jacobi") {
  const int n = 12;
  const double hbar = Resolution(n).hbar();
  std::mt19937_64 rng(8);
  auto br = [&](const Matrix& a, const Matrix& b) -> Matrix { return commutator(a, b) / hbar; };
  for (int k = 0; k < 5; ++k) {
    const Matrix a = zsph::test::random_vorticity(rng, n);
    const Matrix b = zsph::test::random_vorticity(rng, n);
    const Matrix c = zsph::test::random_vorticity(rng, n);
    const double scale = br(a, br(b, c)).norm();
    CHECK((br(a, b) + br(b, a)).norm() <= 1e-12 * br(a, b).norm());
    CHECK((br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))).norm() <= 1e-12 * scale);
  }
}

TEST_CASE("viscous term") {
  const auto& d = disc(8);
  const Complex i(0, 1);
  std::mt19937_64 rng(1);
  const Matrix w = zsph::test::random_vorticity(rng, 8);
  CHECK(viscous_rhs(w, 0.0, d.generators()).norm() == 0.0);
  const Matrix t = i * d.basis->matrix(3, -2);
  CHECK((viscous_rhs(t, 0.01, d.generators()) + 0.12 * t).norm() < 1e-13);
  CHECK((w.adjoint() * viscous_rhs(w, 0.3, d.generators())).trace().real() <= 0.0);
}

TEST_CASE("NIDE: per-term brute-force oracle") {
  const int n = 10;
  const auto& d = disc(n);
  std::mt19937_64 rng(12);
  for (double a : {0.5, 1.0, 2.0}) {
    const auto s = build_noise_scaling(a, 6, 0.7, n);
    const NideOperator op(PowerLawNide{s}, d);
    for (int k = 0; k < 3; ++k) {
      const Matrix w = zsph::test::random_vorticity(rng, n);
      const Matrix expected = nide_oracle(w, s, d);
      CHECK((op.apply(w) - expected).norm() <= 1e-12 * expected.norm());
    }
  }
}

TEST_CASE("NIDE: zero spec and output structure") {
  const int n = 8;
  const auto& d = disc(n);
  std::mt19937_64 rng(2);
  const Matrix w = zsph::test::random_vorticity(rng, n);
  CHECK(apply_nide(w, CustomNide{}, d).norm() == 0.0);
  CHECK(apply_nide(w, CustomNide{{{d.basis->matrix(2, 1), 0.0}}}, d).norm() == 0.0);
  for (const NideSpec& spec : {NideSpec{PowerLawNide{build_noise_scaling(1.0, 5, 0.5, n)}}, NideSpec{AvmNide{}}}) {
    const Matrix r = apply_nide(w, spec, d);
    CHECK((r + r.adjoint()).norm() <= 1e-12 * r.norm());
    CHECK(std::abs(r.trace()) <= 1e-12 * r.norm());
  }
  CHECK_THROWS_AS(apply_nide(w, CustomNide{{{Matrix::Zero(3, 3), 1.0}}}, d), Error);
}

TEST_CASE("NIDE: degree 1 is a multiple of the Laplacian") {
  const int n = 16;
  const auto& d = disc(n);
  const auto s = build_noise_scaling(1.0, 1, 0.5, n);
  std::mt19937_64 rng(20);
  double num = 0, den = 0;
  std::vector<std::pair<Matrix, Matrix>> pairs;
  for (int k = 0; k < 20; ++k) {
    const Matrix w = zsph::test::random_vorticity(rng, n);
    pairs.emplace_back(apply_nide(w, PowerLawNide{s}, d), apply_laplacian(w, d.generators()));
    num += (pairs.back().second.adjoint() * pairs.back().first).trace().real();
    den += pairs.back().second.squaredNorm();
  }
  const double c = num / den;
  double res = 0, tot = 0;
  for (const auto& [y, x] : pairs) {
    res += (y - c * x).squaredNorm();
    tot += y.squaredNorm();
  }
  CHECK(std::sqrt(res / tot) <= 1e-10);
  // sum_m alpha^2 over degree 1 is 2 nu_salt; the constant works out to nu_salt / N.
  CHECK(c == doctest::Approx(0.5 / n).epsilon(1e-10));
}

TEST_CASE("NIDE: dissipation signs and the enstrophy-rate identity") {
  const int n = 12;
  const auto& d = disc(n);
  std::mt19937_64 rng(31);
  const auto s = build_noise_scaling(1.0, 7, 0.5, n);
  const NideOperator op(PowerLawNide{s}, d);
  const auto modes = build_noise_modes(*d.basis, s);
  for (int k = 0; k < 10; ++k) {
    const Matrix w = zsph::test::random_vorticity(rng, n);
    const Matrix lw = op.apply(w);
    const Matrix p = solve_stream(w, *d.laplace);
    CHECK((w.adjoint() * lw).trace().real() <= 0.0);
    // dE/dt = -Re Tr(P^dagger Lambda W) <= 0
    CHECK((p.adjoint() * lw).trace().real() >= 0.0);
    double rhs = 0;
    for (const auto& mode : modes) rhs += mode.alpha * mode.alpha * mode.field.commutator(w).squaredNorm();
    rhs *= -1.0 / (d.hbar() * d.hbar());
    CHECK(zsph::test::rel(2 * (w.adjoint() * lw).trace().real(), rhs) <= 1e-9);
  }
}

TEST_CASE("NIDE: AVM leaves energy unchanged") {
  const int n = 12;
  const auto& d = disc(n);
  std::mt19937_64 rng(41);
  for (int k = 0; k < 5; ++k) {
    const Matrix w = zsph::test::random_vorticity(rng, n);
    const Matrix p = solve_stream(w, *d.laplace);
    const Matrix lw = apply_nide(w, AvmNide{}, d);
    CHECK(std::abs((p.adjoint() * lw).trace()) <= 1e-10 * w.squaredNorm());
    CHECK((w.adjoint() * lw).trace().real() <= 0.0);
    const Matrix expected = commutator(p, commutator(p, w)) / (d.hbar() * d.hbar());
    CHECK((lw - expected).norm() <= 1e-12 * expected.norm());
  }
}

TEST_CASE("NIDE: spectral radius estimate") {
  const int n = 10;
  const auto& d = disc(n);
  const auto s = build_noise_scaling(1.0, 4, 0.5, n);
  const NideOperator op(PowerLawNide{s}, d);
  // Lambda is diagonal in the basis: its largest |eigenvalue| from the T_lm directly.
  double exact = 0;
  for (int l = 1; l < n; ++l)
    for (int m = -l; m <= l; ++m) {
      const Matrix t = Complex(0, 1) * d.basis->matrix(l, m);
      exact = std::max(exact, std::abs((t.adjoint() * op.apply(t)).trace().real()));
    }
  const double est = op.spectral_radius(Matrix::Zero(n, n), 200);
  CHECK(est <= exact * (1 + 1e-9));
  CHECK(est >= 0.95 * exact);
}
