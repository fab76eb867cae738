#include "zsph/fields.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "zsph/rng.hpp"

namespace zsph {

namespace {
constexpr std::uint64_t kInitialConditionStream = 0x1c0de;
}

HarmonicCoefficients random_initial_condition(std::uint64_t seed, int l_max) {
  if (l_max < 1) throw Error(ErrorKind::config, "initial-condition degree must be >= 1");
  CounterRng rng(seed, kInitialConditionStream);
  HarmonicCoefficients c(l_max);
  for (int l = 1; l <= l_max; ++l) {
    for (int m = 0; m <= l; ++m) {
      const double re = rng.normal();
      const double im = rng.normal();
      c.at(l, m) = m == 0 ? Complex(re, 0.0) : Complex(re, im);
    }
  }
  double norm2 = 0.0;
  for (int l = 1; l <= l_max; ++l) {
    norm2 += std::norm(c.at(l, 0));
    for (int m = 1; m <= l; ++m) norm2 += 2.0 * std::norm(c.at(l, m));
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (int l = 1; l <= l_max; ++l) {
    for (int m = 0; m <= l; ++m) c.at(l, m) *= scale;
    for (int m = 1; m <= l; ++m) c.at(l, -m) = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(c.at(l, m));
  }
  return c;
}

double GridField::theta(int i) const { return (i + 0.5) * std::numbers::pi / nlat; }
double GridField::phi(int j) const { return 2.0 * std::numbers::pi * j / nlon; }

std::vector<double> normalized_legendre(int l_max, double theta) {
  const double x = std::cos(theta);
  const double y = std::sin(theta);
  std::vector<double> p(static_cast<std::size_t>((l_max + 1) * (l_max + 1)), 0.0);
  auto at = [&](int l, int m) -> double& { return p[static_cast<std::size_t>(HarmonicCoefficients::index(l, m))]; };

  at(0, 0) = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  for (int m = 1; m <= l_max; ++m) at(m, m) = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * y * at(m - 1, m - 1);
  for (int m = 0; m < l_max; ++m) at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * x * at(m, m);
  for (int m = 0; m <= l_max; ++m) {
    for (int l = m + 2; l <= l_max; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
      const double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - static_cast<double>(m) * m) /
                                 (4.0 * (l - 1) * (l - 1) - 1.0));
      at(l, m) = a * (x * at(l - 1, m) - b * at(l - 2, m));
    }
  }
  return p;
}

Synthesis synthesize_grid(const HarmonicCoefficients& coeffs, int nlat, int nlon) {
  if (nlat < 2 || nlon < 2) throw Error(ErrorKind::config, "grid dimensions must be >= 2");
  const int lmax = coeffs.max_degree();
  Synthesis out;
  out.field.nlat = nlat;
  out.field.nlon = nlon;
  out.field.values.assign(static_cast<std::size_t>(nlat) * nlon, 0.0);

  std::vector<Complex> phase(static_cast<std::size_t>((2 * lmax + 1) * nlon));
  for (int m = -lmax; m <= lmax; ++m) {
    for (int j = 0; j < nlon; ++j) {
      phase[static_cast<std::size_t>((m + lmax) * nlon + j)] = std::polar(1.0, m * out.field.phi(j));
    }
  }

  std::vector<Complex> band(static_cast<std::size_t>(2 * lmax + 1));
  for (int i = 0; i < nlat; ++i) {
    const std::vector<double> p = normalized_legendre(lmax, out.field.theta(i));
    // Y_{l,-m} = (-1)^m conj(Y_lm) = (-1)^m Pbar_lm e^{-i m phi}
    for (int m = -lmax; m <= lmax; ++m) {
      const int am = m < 0 ? -m : m;
      const double sign = (m < 0 && am % 2 == 1) ? -1.0 : 1.0;
      Complex acc = 0.0;
      for (int l = am; l <= lmax; ++l) acc += coeffs.at(l, m) * p[static_cast<std::size_t>(HarmonicCoefficients::index(l, am))];
      band[static_cast<std::size_t>(m + lmax)] = sign * acc;
    }
    for (int j = 0; j < nlon; ++j) {
      Complex v = 0.0;
      for (int m = -lmax; m <= lmax; ++m) {
        v += band[static_cast<std::size_t>(m + lmax)] * phase[static_cast<std::size_t>((m + lmax) * nlon + j)];
      }
      out.field.values[static_cast<std::size_t>(i) * nlon + j] = v.real();
      out.max_imaginary = std::max(out.max_imaginary, std::abs(v.imag()));
    }
  }
  return out;
}

namespace {

constexpr char kGridMagic[4] = {'Z', 'G', 'R', 'D'};
constexpr std::uint32_t kGridVersion = 1;

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw Error(ErrorKind::io, "truncated grid file");
  return v;
}

}  // namespace

void write_grid_file(const std::filesystem::path& path, const GridField& grid, double time) {
  static_assert(std::endian::native == std::endian::little);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path.string());
  out.write(kGridMagic, 4);
  put<std::uint32_t>(out, kGridVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.nlat));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.nlon));
  put<double>(out, time);
  out.write(reinterpret_cast<const char*>(grid.values.data()),
            static_cast<std::streamsize>(grid.values.size() * sizeof(double)));
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

GridField read_grid_file(const std::filesystem::path& path, double* time) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kGridMagic, 4) != 0) throw Error(ErrorKind::io, "bad grid magic");
  if (get<std::uint32_t>(in) != kGridVersion) throw Error(ErrorKind::io, "unsupported grid version");
  GridField g;
  g.nlat = static_cast<int>(get<std::uint32_t>(in));
  g.nlon = static_cast<int>(get<std::uint32_t>(in));
  const double t = get<double>(in);
  if (time) *time = t;
  g.values.resize(static_cast<std::size_t>(g.nlat) * g.nlon);
  if (!in.read(reinterpret_cast<char*>(g.values.data()), static_cast<std::streamsize>(g.values.size() * sizeof(double)))) {
    throw Error(ErrorKind::io, "truncated grid body");
  }
  return g;
}

void write_coefficients(const std::filesystem::path& path, const HarmonicCoefficients& coeffs) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path.string());
  out << "l,m,re,im\n" << std::setprecision(17);
  for (int l = 0; l <= coeffs.max_degree(); ++l) {
    for (int m = -l; m <= l; ++m) out << l << ',' << m << ',' << coeffs.at(l, m).real() << ',' << coeffs.at(l, m).imag() << '\n';
  }
}

HarmonicCoefficients read_coefficients(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "l,m,re,im") throw Error(ErrorKind::io, "coefficient file needs header l,m,re,im");
  struct Row {
    int l, m;
    double re, im;
  };
  std::vector<Row> rows;
  int lmax = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    Row r{};
    char c1, c2, c3;
    if (!(ss >> r.l >> c1 >> r.m >> c2 >> r.re >> c3 >> r.im) || c1 != ',' || c2 != ',' || c3 != ',' || r.l < 0 ||
        r.m < -r.l || r.m > r.l) {
      throw Error(ErrorKind::io, "malformed coefficient row: " + line);
    }
    lmax = std::max(lmax, r.l);
    rows.push_back(r);
  }
  HarmonicCoefficients c(lmax);
  for (const auto& r : rows) c.at(r.l, r.m) = Complex(r.re, r.im);
  return c;
}

}  // namespace zsph
