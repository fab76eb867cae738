#include "zsph/quantization.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "zsph/laplacian.hpp"

namespace zsph {

static_assert(std::endian::native == std::endian::little, "cache I/O assumes a little-endian host");

SpinGenerators build_spin_generators(int n) {
  if (n < 2) throw Error(ErrorKind::invalid_resolution, "N must be >= 2, got " + std::to_string(n));
  const double s = 0.5 * (n - 1);
  SpinGenerators gen;
  gen.sz_diagonal.resize(static_cast<std::size_t>(n));
  gen.splus_superdiagonal.resize(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) gen.sz_diagonal[static_cast<std::size_t>(i)] = s - i;
  for (int i = 0; i + 1 < n; ++i) {
    const double m = s - (i + 1);  // weight of the column being raised
    gen.splus_superdiagonal[static_cast<std::size_t>(i)] = std::sqrt(s * (s + 1) - m * (m + 1));
  }

  Matrix splus = Matrix::Zero(n, n);
  gen.sz = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) gen.sz(i, i) = gen.sz_diagonal[static_cast<std::size_t>(i)];
  for (int i = 0; i + 1 < n; ++i) splus(i, i + 1) = gen.splus_superdiagonal[static_cast<std::size_t>(i)];
  const Matrix sminus = splus.adjoint();
  gen.sx = 0.5 * (splus + sminus);
  gen.sy = (splus - sminus) / Complex(0.0, 2.0);
  return gen;
}

BandedMatrix SpinGenerators::sz_banded() const {
  BandedMatrix b(size());
  Eigen::VectorXcd v(size());
  for (int i = 0; i < size(); ++i) v[i] = sz_diagonal[static_cast<std::size_t>(i)];
  b.add_diagonal(0, v);
  return b;
}

BandedMatrix SpinGenerators::splus_banded() const {
  BandedMatrix b(size());
  Eigen::VectorXcd v(size() - 1);
  for (int i = 0; i + 1 < size(); ++i) v[i] = splus_superdiagonal[static_cast<std::size_t>(i)];
  b.add_diagonal(1, v);
  return b;
}

BandedMatrix SpinGenerators::sminus_banded() const { return splus_banded().adjoint(); }

double HarmonicCoefficients::real_field_residual() const {
  double worst = 0.0;
  for (int l = 0; l <= max_degree_; ++l) {
    for (int m = 1; m <= l; ++m) {
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      worst = std::max(worst, std::abs(at(l, -m) - sign * std::conj(at(l, m))));
    }
    worst = std::max(worst, std::abs(at(l, 0).imag()));
  }
  return worst;
}

namespace {

using Real = long double;

// Highest-weight element of degree l on diagonal l, normalized, with sign (-1)^l.
// Entries are products of l consecutive S+ entries, formed in log space so
// that large degrees do not overflow.
std::vector<Real> highest_weight(const std::vector<Real>& splus, int n, int l) {
  const int len = n - l;
  std::vector<Real> out(static_cast<std::size_t>(len));
  if (l == 0) {
    std::fill(out.begin(), out.end(), 1.0L / std::sqrt(static_cast<Real>(n)));
    return out;
  }
  std::vector<Real> logs(static_cast<std::size_t>(len));
  for (int k = 0; k < len; ++k) {
    Real acc = 0;
    for (int j = k; j < k + l; ++j) acc += std::log(splus[static_cast<std::size_t>(j)]);
    logs[static_cast<std::size_t>(k)] = acc;
  }
  const Real top = *std::max_element(logs.begin(), logs.end());
  Real norm2 = 0;
  for (int k = 0; k < len; ++k) {
    out[static_cast<std::size_t>(k)] = std::exp(logs[static_cast<std::size_t>(k)] - top);
    norm2 += out[static_cast<std::size_t>(k)] * out[static_cast<std::size_t>(k)];
  }
  const Real scale = ((l % 2 == 0) ? 1.0L : -1.0L) / std::sqrt(norm2);
  for (auto& v : out) v *= scale;
  return out;
}

// [S-, T] for T on diagonal m; the result lives on diagonal m - 1.
std::vector<Real> lower(const std::vector<Real>& t, const std::vector<Real>& splus, int n, int m) {
  const int d = m - 1;
  const int len = diagonal_length(n, d);
  auto entry = [&](int r, int c) -> Real {
    if (r < 0 || c < 0 || r >= n || c >= n) return 0;
    return t[static_cast<std::size_t>(m >= 0 ? r : c)];
  };
  std::vector<Real> out(static_cast<std::size_t>(len));
  for (int k = 0; k < len; ++k) {
    const int i = diagonal_row(d, k);
    const int j = diagonal_col(d, k);
    Real v = 0;
    if (i >= 1) v += splus[static_cast<std::size_t>(i - 1)] * entry(i - 1, j);
    if (j + 1 < n) v -= entry(i, j + 1) * splus[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(k)] = v;
  }
  return out;
}

}  // namespace

BasisCache build_basis(Resolution resolution) {
  const int n = resolution.n();
  const Real s = 0.5L * (n - 1);
  std::vector<Real> splus(static_cast<std::size_t>(n - 1));
  for (int i = 0; i + 1 < n; ++i) {
    const Real m = s - (i + 1);
    splus[static_cast<std::size_t>(i)] = std::sqrt(s * (s + 1) - m * (m + 1));
  }
  const LaplaceFactorization laplace = build_factorization(resolution, build_spin_generators(n));

  // Values come from the eigenvectors of the tridiagonal Laplacian block of
  // each diagonal; iterating the lowering recurrence loses all accuracy past
  // N ~ 30. One lowering step from the accurate T_{l,m+1} still fixes the sign.
  std::vector<std::vector<double>> diagonals(static_cast<std::size_t>(n) * n);
  auto slot = [&](int l, int m) -> std::vector<double>& {
    return diagonals[static_cast<std::size_t>(BasisCache::index(l, m))];
  };
  for (int m = n - 1; m >= 0; --m) {
    const auto& block = laplace.block(m);
    const int len = static_cast<int>(block.main.size());
    Eigen::VectorXd main(len), off(std::max(len - 1, 0));
    for (int k = 0; k < len; ++k) main[k] = block.main[static_cast<std::size_t>(k)];
    for (int k = 0; k + 1 < len; ++k) off[k] = block.off[static_cast<std::size_t>(k)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    if (len == 1) {
      eig.compute(Eigen::MatrixXd::Constant(1, 1, main[0]));
    } else {
      eig.computeFromTridiagonal(main, off, Eigen::ComputeEigenvectors);
    }
    if (eig.info() != Eigen::Success) {
      throw Error(ErrorKind::internal_consistency, "eigen-solve failed on diagonal " + std::to_string(m));
    }
    // Eigenvalues ascend, so degree l = N-1 comes first and l = m last.
    for (int e = 0; e < len; ++e) {
      const int l = n - 1 - e;
      const double expected = -static_cast<double>(l) * (l + 1);
      if (std::abs(eig.eigenvalues()[e] - expected) > 1e-8 * (1.0 + std::abs(expected))) {
        throw Error(ErrorKind::internal_consistency, "Laplacian spectrum does not match -l(l+1)");
      }
      std::vector<double> v(eig.eigenvectors().col(e).data(), eig.eigenvectors().col(e).data() + len);
      Real alignment = 0;
      if (l == m) {
        const std::vector<Real> top = highest_weight(splus, n, l);
        for (int k = 0; k < len; ++k) alignment += top[static_cast<std::size_t>(k)] * v[static_cast<std::size_t>(k)];
      } else {
        const auto& above = slot(l, m + 1);
        const std::vector<Real> lowered = lower(std::vector<Real>(above.begin(), above.end()), splus, n, m + 1);
        for (int k = 0; k < len; ++k) alignment += lowered[static_cast<std::size_t>(k)] * v[static_cast<std::size_t>(k)];
      }
      if (alignment < 0) {
        for (auto& x : v) x = -x;
      }
      slot(l, m) = std::move(v);
    }
  }
  // T_{l,-m} = (-1)^m T_lm^T, which lives on diagonal -m with the same entries.
  for (int l = 1; l < n; ++l) {
    for (int m = 1; m <= l; ++m) {
      std::vector<double> v = slot(l, m);
      if (m % 2 == 1) {
        for (auto& x : v) x = -x;
      }
      slot(l, -m) = std::move(v);
    }
  }
  return BasisCache(resolution, std::move(diagonals));
}

BasisCache::BasisCache(Resolution resolution, std::vector<std::vector<double>> diagonals)
    : resolution_(resolution), generators_(build_spin_generators(resolution.n())), diagonals_(std::move(diagonals)) {
  const int n = resolution_.n();
  if (diagonals_.size() != static_cast<std::size_t>(n) * n) {
    throw Error(ErrorKind::internal_consistency, "basis element count must be N^2");
  }
}

std::span<const double> BasisCache::diagonal(int l, int m) const {
  if (l < 0 || l >= size() || m < -l || m > l) {
    throw Error(ErrorKind::truncation_overflow, "no basis element (" + std::to_string(l) + "," + std::to_string(m) + ")");
  }
  return diagonals_[static_cast<std::size_t>(index(l, m))];
}

BandedMatrix BasisCache::banded(int l, int m) const {
  const auto d = diagonal(l, m);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(d.size()));
  for (std::size_t k = 0; k < d.size(); ++k) v[static_cast<Eigen::Index>(k)] = d[k];
  BandedMatrix b(size());
  b.add_diagonal(m, v);
  return b;
}

Matrix BasisCache::matrix(int l, int m) const { return banded(l, m).dense(); }

Matrix project(const HarmonicCoefficients& coeffs, const BasisCache& cache) {
  const int n = cache.size();
  if (coeffs.max_degree() > n - 1) {
    throw Error(ErrorKind::truncation_overflow,
                "coefficient degree " + std::to_string(coeffs.max_degree()) + " exceeds N-1 = " + std::to_string(n - 1));
  }
  if (coeffs.at(0, 0) != Complex(0.0)) {
    throw Error(ErrorKind::zero_mean_violation, "coefficient (0,0) must vanish");
  }
  Matrix w = Matrix::Zero(n, n);
  const Complex i(0.0, 1.0);
  for (int l = 1; l <= coeffs.max_degree(); ++l) {
    for (int m = -l; m <= l; ++m) {
      const Complex c = i * coeffs.at(l, m);
      if (c == Complex(0.0)) continue;
      const auto t = cache.diagonal(l, m);
      for (std::size_t k = 0; k < t.size(); ++k) {
        const int kk = static_cast<int>(k);
        w(diagonal_row(m, kk), diagonal_col(m, kk)) += c * t[k];
      }
    }
  }
  return w;
}

HarmonicCoefficients extract(const Matrix& w, const BasisCache& cache) {
  const int n = cache.size();
  if (w.rows() != n || w.cols() != n) throw Error(ErrorKind::shape, "matrix size does not match basis");
  HarmonicCoefficients out(n - 1);
  for (int l = 0; l < n; ++l) {
    for (int m = -l; m <= l; ++m) {
      const auto t = cache.diagonal(l, m);
      Complex acc = 0.0;
      for (std::size_t k = 0; k < t.size(); ++k) {
        const int kk = static_cast<int>(k);
        acc += t[k] * w(diagonal_row(m, kk), diagonal_col(m, kk));
      }
      out.at(l, m) = Complex(0.0, -1.0) * acc;
    }
  }
  return out;
}

namespace {

constexpr char kMagic[4] = {'Z', 'S', 'P', 'H'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::filesystem::path& path) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw Error(ErrorKind::corrupt_cache, "truncated cache file " + path.string());
  }
  return value;
}

}  // namespace

std::filesystem::path cache_file_name(const std::filesystem::path& dir, int n) {
  return dir / ("zsph_basis_N" + std::to_string(n) + ".bin");
}

void write_cache(const BasisCache& cache, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
  const int n = cache.size();
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(n));
  put<std::uint32_t>(out, cache.phase_convention());

  std::vector<double> row(static_cast<std::size_t>(2 * n));
  for (int l = 0; l < n; ++l) {
    for (int m = -l; m <= l; ++m) {
      const auto t = cache.diagonal(l, m);
      for (int i = 0; i < n; ++i) {
        std::fill(row.begin(), row.end(), 0.0);
        const int j = i + m;
        if (j >= 0 && j < n) row[static_cast<std::size_t>(2 * j)] = t[static_cast<std::size_t>(m >= 0 ? i : j)];
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(double)));
      }
    }
  }
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

BasisCache read_cache(const std::filesystem::path& path, std::optional<int> expected_n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open cache " + path.string());
  char magic[4];
  if (!in.read(magic, 4)) throw Error(ErrorKind::corrupt_cache, "truncated cache header in " + path.string());
  if (std::memcmp(magic, kMagic, 4) != 0) throw Error(ErrorKind::corrupt_cache, "bad magic in " + path.string());
  const auto version = get<std::uint32_t>(in, path);
  if (version != kFormatVersion) {
    throw Error(ErrorKind::corrupt_cache, "unsupported cache version " + std::to_string(version));
  }
  const auto n = static_cast<int>(get<std::uint32_t>(in, path));
  const auto phase = get<std::uint32_t>(in, path);
  if (phase != BasisCache::kPhaseConvention) {
    throw Error(ErrorKind::corrupt_cache, "unknown phase convention tag " + std::to_string(phase));
  }
  if (n < 2) throw Error(ErrorKind::corrupt_cache, "invalid N in cache header");
  if (expected_n && *expected_n != n) {
    throw Error(ErrorKind::resolution_mismatch,
                "cache holds N = " + std::to_string(n) + ", requested N = " + std::to_string(*expected_n));
  }

  std::vector<std::vector<double>> diagonals(static_cast<std::size_t>(n) * n);
  std::vector<double> row(static_cast<std::size_t>(2 * n));
  for (int l = 0; l < n; ++l) {
    for (int m = -l; m <= l; ++m) {
      auto& diag = diagonals[static_cast<std::size_t>(BasisCache::index(l, m))];
      diag.assign(static_cast<std::size_t>(diagonal_length(n, m)), 0.0);
      for (int i = 0; i < n; ++i) {
        if (!in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(double)))) {
          throw Error(ErrorKind::corrupt_cache, "truncated cache body in " + path.string());
        }
        for (int j = 0; j < n; ++j) {
          const double re = row[static_cast<std::size_t>(2 * j)];
          const double im = row[static_cast<std::size_t>(2 * j + 1)];
          if (j - i == m) {
            if (im != 0.0) throw Error(ErrorKind::corrupt_cache, "complex entry under a real phase convention");
            diag[static_cast<std::size_t>(m >= 0 ? i : j)] = re;
          } else if (re != 0.0 || im != 0.0) {
            throw Error(ErrorKind::corrupt_cache, "entry outside diagonal m for (" + std::to_string(l) + "," +
                                                      std::to_string(m) + ")");
          }
        }
      }
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorKind::corrupt_cache, "trailing bytes in " + path.string());
  }
  return BasisCache(Resolution(n), std::move(diagonals));
}

}  // namespace zsph
