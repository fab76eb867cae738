#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>

#include "support.hpp"
#include "zsph/diagnostics.hpp"
#include "zsph/fields.hpp"

using namespace zsph;
using zsph::test::disc;

namespace {

// Fejer type-1 weights for int_{-1}^{1} f(x) dx on x_i = cos((i + 1/2) pi / n).
std::vector<double> fejer_weights(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double theta = (i + 0.5) * std::numbers::pi / n;
    double s = 0;
    for (int k = 1; k <= n / 2; ++k) s += std::cos(2 * k * theta) / (4.0 * k * k - 1);
    w[static_cast<std::size_t>(i)] = 2.0 / n * (1 - 2 * s);
  }
  return w;
}

std::filesystem::path temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "zsph_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("initial condition") {
  const auto a = random_initial_condition(42);
  const auto b = random_initial_condition(42);
  const auto c = random_initial_condition(43);
  CHECK(a.max_degree() == 10);
  CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  CHECK(!std::equal(a.values().begin(), a.values().end(), c.values().begin()));
  CHECK(a.real_field_residual() == 0.0);
  CHECK(a.at(0, 0) == 0.0);
  for (int l = 1; l <= 10; ++l) CHECK(a.at(l, 0).imag() == 0.0);
  for (std::uint64_t seed : {0ull, 1ull, 77ull, 123456789ull}) {
    const auto ic = random_initial_condition(seed, 10);
    CHECK(enstrophy(project(ic, *disc(16).basis)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(random_initial_condition(5, 3).max_degree() == 3);
  CHECK_THROWS_AS(random_initial_condition(1, 0), Error);
}

TEST_CASE("synthesis: constant and first zonal harmonic") {
  HarmonicCoefficients c(0);
  c.at(0, 0) = 2.5;
  const auto g = synthesize_grid(c, 8, 16).field;
  for (double v : g.values) CHECK(v == doctest::Approx(2.5 / std::sqrt(4 * std::numbers::pi)));

  HarmonicCoefficients z(1);
  z.at(1, 0) = 1.0;
  const auto f = synthesize_grid(z, 16, 8).field;
  double best = -1e300;
  int best_row = -1;
  for (int i = 0; i < f.nlat; ++i)
    for (int j = 0; j < f.nlon; ++j) {
      CHECK(f.at(i, j) == doctest::Approx(std::sqrt(3 / (4 * std::numbers::pi)) * std::cos(f.theta(i))));
      if (f.at(i, j) > best) {
        best = f.at(i, j);
        best_row = i;
      }
    }
  CHECK(best_row == 0);
  CHECK_THROWS_AS(synthesize_grid(z, 1, 8), Error);
}

TEST_CASE("synthesis: Parseval by quadrature") {
  std::mt19937_64 rng(1);
  const auto c = zsph::test::random_coefficients(rng, 10);
  const int nlat = 256, nlon = 512;
  const auto s = synthesize_grid(c, nlat, nlon);
  const auto w = fejer_weights(nlat);
  double integral = 0, maxabs = 0;
  for (int i = 0; i < nlat; ++i) {
    double row = 0;
    for (int j = 0; j < nlon; ++j) {
      row += s.field.at(i, j) * s.field.at(i, j);
      maxabs = std::max(maxabs, std::abs(s.field.at(i, j)));
    }
    integral += w[static_cast<std::size_t>(i)] * row * 2 * std::numbers::pi / nlon;
  }
  double sum = 0;
  for (auto v : c.values()) sum += std::norm(v);
  CHECK(std::abs(integral - sum) <= 1e-6 * sum);
  CHECK(s.max_imaginary <= 1e-10 * maxabs);
}

TEST_CASE("synthesis: linear in the coefficients") {
  std::mt19937_64 rng(2);
  const auto a = zsph::test::random_coefficients(rng, 6);
  const auto b = zsph::test::random_coefficients(rng, 6);
  HarmonicCoefficients sum(6);
  for (int l = 0; l <= 6; ++l)
    for (int m = -l; m <= l; ++m) sum.at(l, m) = 2.0 * a.at(l, m) - 0.5 * b.at(l, m);
  const auto ga = synthesize_grid(a, 12, 24).field, gb = synthesize_grid(b, 12, 24).field;
  const auto gs = synthesize_grid(sum, 12, 24).field;
  for (std::size_t k = 0; k < gs.values.size(); ++k)
    CHECK(gs.values[k] == doctest::Approx(2.0 * ga.values[k] - 0.5 * gb.values[k]).epsilon(1e-12).scale(10));
}

TEST_CASE("Legendre recurrence to degree 512") {
  const int lmax = 512, nlat = 1100;
  const auto w = fejer_weights(nlat);
  std::vector<std::pair<int, int>> probe{{512, 0}, {512, 1}, {512, 256}, {512, 512}, {300, 17}, {511, 510}};
  std::vector<double> norms(probe.size(), 0.0);
  double cross = 0;
  for (int i = 0; i < nlat; ++i) {
    const double theta = (i + 0.5) * std::numbers::pi / nlat;
    const auto p = normalized_legendre(lmax, theta);
    for (double v : p) REQUIRE(std::isfinite(v));
    for (std::size_t k = 0; k < probe.size(); ++k) {
      const double v = p[static_cast<std::size_t>(HarmonicCoefficients::index(probe[k].first, probe[k].second))];
      norms[k] += w[static_cast<std::size_t>(i)] * v * v * 2 * std::numbers::pi;
    }
    cross += w[static_cast<std::size_t>(i)] * 2 * std::numbers::pi * p[static_cast<std::size_t>(HarmonicCoefficients::index(512, 3))] *
             p[static_cast<std::size_t>(HarmonicCoefficients::index(510, 3))];
  }
  for (double nrm : norms) CHECK(nrm == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(cross) <= 1e-10);
}

TEST_CASE("grid file round trip") {
  GridField g;
  g.nlat = 3;
  g.nlon = 4;
  for (int k = 0; k < 12; ++k) g.values.push_back(k * 0.25 - 1.0);
  const auto path = temp_path("grid.zgrd");
  write_grid_file(path, g, 2.75);
  CHECK(std::filesystem::file_size(path) == 4 + 4 + 4 + 4 + 8 + 12 * 8);
  double t = 0;
  const auto back = read_grid_file(path, &t);
  CHECK(t == 2.75);
  CHECK(back.nlat == 3);
  CHECK(back.nlon == 4);
  CHECK(back.values == g.values);
  {
    std::ifstream in(path, std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    CHECK(std::string(magic, 4) == "ZGRD");
  }
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.write("XGRD", 4);
  }
  CHECK_THROWS_AS(read_grid_file(path), Error);
  std::filesystem::resize_file(path, 20);
  CHECK_THROWS_AS(read_grid_file(path), Error);
}

TEST_CASE("coefficient file round trip") {
  const auto c = random_initial_condition(9, 4);
  const auto path = temp_path("state.csv");
  write_coefficients(path, c);
  const auto back = read_coefficients(path);
  CHECK(back.max_degree() == 4);
  CHECK(std::equal(c.values().begin(), c.values().end(), back.values().begin()));
  {
    std::ofstream bad(path);
    bad << "l,m,re,im\n2,5,1,0\n";
  }
  CHECK_THROWS_AS(read_coefficients(path), Error);
  {
    std::ofstream bad(path);
    bad << "a,b\n";
  }
  CHECK_THROWS_AS(read_coefficients(path), Error);
}
