#include <doctest.h>

#include "support.hpp"
#include "zsph/diagnostics.hpp"
#include "zsph/integrators.hpp"

using namespace zsph;
using zsph::test::disc;

TEST_CASE("energy and enstrophy") {
  const int n = 14;
  const auto& d = disc(n);
  CHECK(energy(Matrix::Zero(n, n), *d.laplace) == 0.0);
  CHECK(enstrophy(Matrix::Zero(n, n)) == 0.0);
  const Complex i(0, 1);
  CHECK(energy(i * d.basis->matrix(1, 0), *d.laplace) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(enstrophy(i * d.basis->matrix(5, 3)) == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 rng(1);
  for (int k = 0; k < 5; ++k) {
    const Matrix w = zsph::test::random_vorticity(rng, n);
    const auto c = extract(w, *d.basis);
    double e = 0, s = 0;
    for (int l = 1; l < n; ++l)
      for (int m = -l; m <= l; ++m) {
        e += 0.5 * std::norm(c.at(l, m)) / (l * (l + 1.0));
        s += std::norm(c.at(l, m));
      }
    CHECK(zsph::test::rel(energy(w, *d.laplace), e) <= 1e-10);
    CHECK(zsph::test::rel(enstrophy(w), s) <= 1e-10);
    CHECK(energy(w, *d.laplace) >= 0.0);
  }
}

TEST_CASE("casimirs") {
  const auto& d2 = disc(2);
  const auto c = casimirs(Complex(0, 1) * d2.basis->matrix(1, 0), 4);
  CHECK(c[0] == doctest::Approx(-1.0).epsilon(1e-14));
  Matrix w(2, 2);
  w << Complex(0, 1), 0, 0, Complex(0, -1);
  const auto cw = casimirs(w, 3);
  CHECK(cw.size() == 2);
  CHECK(cw[0] == doctest::Approx(-2.0));
  CHECK(cw[1] == 0.0);
  CHECK_THROWS_AS(casimirs(w, 1), Error);

  std::mt19937_64 rng(2);
  const Matrix r = zsph::test::random_vorticity(rng, 10);
  const Matrix u = zsph::test::random_unitary(rng, 10);
  const auto a = casimirs(r, 6);
  const auto b = casimirs(u * r * u.adjoint(), 6);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-12 * std::pow(r.norm(), k + 2));
}

TEST_CASE("spectrum") {
  Matrix w(2, 2);
  w << Complex(0, 1), 0, 0, Complex(0, -1);
  const auto s = spectrum(w);
  CHECK(s(0) == doctest::Approx(-1.0));
  CHECK(s(1) == doctest::Approx(1.0));
  CHECK(spectrum(Matrix::Zero(4, 4)).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(3);
  const Matrix r = zsph::test::random_vorticity(rng, 12);
  const Matrix u = zsph::test::random_unitary(rng, 12);
  CHECK((spectrum(r) - spectrum(u * r * u.adjoint())).cwiseAbs().maxCoeff() <= 1e-11);
  CHECK(spectrum_drift(spectrum(r), spectrum(r)) == 0.0);
  CHECK_THROWS_AS(spectrum_drift(spectrum(r), s), Error);
}

TEST_CASE("nide_rates") {
  const int n = 12;
  const auto& d = disc(n);
  std::mt19937_64 rng(4);
  const Matrix w = zsph::test::random_vorticity(rng, n);

  const NideOperator none(CustomNide{}, d);
  const auto z = nide_rates(w, none, *d.laplace);
  CHECK(z.energy_rate == 0.0);
  CHECK(z.enstrophy_rate == 0.0);

  const NideOperator avm(AvmNide{}, d);
  const auto ra = nide_rates(w, avm, *d.laplace);
  CHECK(std::abs(ra.energy_rate) <= 1e-10 * energy(w, *d.laplace));
  CHECK(ra.enstrophy_rate <= 0.0);

  for (double a : {0.5, 1.0, 2.0}) {
    const NideOperator op(PowerLawNide{build_noise_scaling(a, 6, 0.5, n)}, d);
    const auto r = nide_rates(w, op, *d.laplace);
    CHECK(r.energy_rate <= 0.0);
    CHECK(r.enstrophy_rate <= 0.0);
    CHECK(std::abs(r.enstrophy_rate) / enstrophy(w) >= std::abs(r.energy_rate) / energy(w, *d.laplace));
  }
}

TEST_CASE("nide_rates match finite differences of the dissipation flow") {
  const int n = 12;
  const auto& d = disc(n);
  std::mt19937_64 rng(5);
  const Matrix w0 = zsph::test::random_vorticity(rng, n);
  for (const NideSpec& spec : {NideSpec{PowerLawNide{build_noise_scaling(1.0, 6, 0.5, n)}}, NideSpec{AvmNide{}}}) {
    ModelSpec m;
    m.variant = NideModel{spec};
    m.h = 1e-3;
    m.transport = false;
    const Stepper st(d, m);
    const Matrix w1 = st.step(w0, nullptr);
    const Matrix w2 = st.step(w1, nullptr);
    const NideOperator op(spec, d);
    const auto r = nide_rates(w1, op, *d.laplace);
    const double ds = (enstrophy(w2) - enstrophy(w0)) / (2 * m.h);
    const double de = (energy(w2, *d.laplace) - energy(w0, *d.laplace)) / (2 * m.h);
    CHECK(zsph::test::rel(ds, r.enstrophy_rate) <= 1e-4);
    if (std::holds_alternative<AvmNide>(spec)) {
      CHECK(std::abs(de) <= 1e-4 * std::abs(ds));
    } else {
      CHECK(zsph::test::rel(de, r.energy_rate) <= 1e-4);
    }
  }
}

TEST_CASE("scaling norms") {
  const auto s = scaling_norms(1.0, 1, 0.5);
  CHECK(s.c_l2 == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-15));
  CHECK(s.regime == NoiseRegime::vanishing);
  CHECK(std::string(to_string(scaling_norms(2.0, 4, 0.5).regime)) == "non-vanishing");
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ua(0.1, 3), unu(0.01, 3);
  for (int k = 0; k < 20; ++k) {
    const double nu = unu(rng);
    const auto r = scaling_norms(ua(rng), 1 + k * 7, nu);
    CHECK(r.alpha_inf * r.c_l2 == doctest::Approx(std::sqrt(2 * nu)).epsilon(1e-14));
  }
  for (double a : {0.5, 1.0, 2.0}) {
    double prev = 1e300;
    for (int m = 1; m <= 200; ++m) {
      const double ai = scaling_norms(a, m, 0.5).alpha_inf;
      CHECK(ai <= prev);
      prev = ai;
    }
  }
  // log-log slope of |c| against M approaches 1 - a
  const double m1 = 256, m2 = 512;
  const double slope = std::log(scaling_norms(0.5, 512, 0.5).c_l2 / scaling_norms(0.5, 256, 0.5).c_l2) / std::log(m2 / m1);
  CHECK(slope == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("matched viscosity") {
  const int n = 12;
  const auto& d = disc(n);
  // degree-1 NIDE is (nu_salt / N) times the Laplacian
  const NideOperator op(PowerLawNide{build_noise_scaling(1.0, 1, 0.5, n)}, d);
  std::mt19937_64 rng(7);
  const Matrix w = zsph::test::random_vorticity(rng, n);
  CHECK(matched_viscosity(w, op, d) == doctest::Approx(0.5 / n).epsilon(1e-10));
}

TEST_CASE("sample_diagnostics") {
  const auto& d = disc(8);
  std::mt19937_64 rng(8);
  const Matrix w = zsph::test::random_vorticity(rng, 8);
  const auto s = sample_diagnostics(1.5, w, *d.laplace, spectrum(w));
  CHECK(s.t == 1.5);
  CHECK(s.casimirs.size() == 3);
  CHECK(s.spectrum_drift == 0.0);
  CHECK(s.enstrophy == doctest::Approx(-s.casimirs[0]));
}
