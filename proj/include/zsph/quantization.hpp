#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "zsph/banded.hpp"
#include "zsph/types.hpp"

namespace zsph {

/// Spin s = (N-1)/2 irreducible representation. Row i carries weight s - i.
struct SpinGenerators {
  Matrix sx, sy, sz;
  /// Diagonal of Sz and the superdiagonal of S+ (S- is its transpose).
  std::vector<double> sz_diagonal;
  std::vector<double> splus_superdiagonal;

  int size() const { return static_cast<int>(sz_diagonal.size()); }
  BandedMatrix sz_banded() const;
  BandedMatrix splus_banded() const;
  BandedMatrix sminus_banded() const;
};

SpinGenerators build_spin_generators(int n);

/// Spherical-harmonic coefficients w_lm for l = 0..L, m = -l..l, stored in
/// lexicographic order (l ascending, m from -l to l).
class HarmonicCoefficients {
 public:
  HarmonicCoefficients() = default;
  explicit HarmonicCoefficients(int max_degree)
      : max_degree_(max_degree), values_(static_cast<std::size_t>((max_degree + 1) * (max_degree + 1))) {}

  static int index(int l, int m) { return l * l + l + m; }

  int max_degree() const { return max_degree_; }
  Complex& at(int l, int m) { return values_[static_cast<std::size_t>(index(l, m))]; }
  const Complex& at(int l, int m) const { return values_[static_cast<std::size_t>(index(l, m))]; }
  std::span<const Complex> values() const { return values_; }
  std::span<Complex> values() { return values_; }

  /// Largest violation of w(l,-m) = (-1)^m conj(w(l,m)).
  double real_field_residual() const;

 private:
  int max_degree_ = 0;
  std::vector<Complex> values_;
};

/// The N^2 quantized harmonics T_lm. Each T_lm is real and lives on matrix
/// diagonal m, so only that diagonal is kept in memory.
class BasisCache {
 public:
  /// T_ll = (-1)^l (S+)^l / |(S+)^l|, lowered with ad(S-). This makes every
  /// T_lm real, T_lm^dagger = (-1)^m T_{l,-m}, and T_10 a positive multiple of Sz,
  /// the matrix analogue of the Condon-Shortley phase.
  static constexpr std::uint32_t kPhaseConvention = 1;

  BasisCache(Resolution resolution, std::vector<std::vector<double>> diagonals);

  const Resolution& resolution() const { return resolution_; }
  int size() const { return resolution_.n(); }
  const SpinGenerators& generators() const { return generators_; }
  std::uint32_t phase_convention() const { return kPhaseConvention; }

  static int index(int l, int m) { return l * l + l + m; }
  std::span<const double> diagonal(int l, int m) const;
  BandedMatrix banded(int l, int m) const;
  Matrix matrix(int l, int m) const;

 private:
  Resolution resolution_;
  SpinGenerators generators_;
  std::vector<std::vector<double>> diagonals_;
};

BasisCache build_basis(Resolution resolution);

/// W = sum_lm w_lm (i T_lm). Requires L <= N-1 and w_00 = 0.
Matrix project(const HarmonicCoefficients& coeffs, const BasisCache& cache);

/// w_lm = Tr((i T_lm)^dagger W) for every l = 0..N-1.
HarmonicCoefficients extract(const Matrix& w, const BasisCache& cache);

std::filesystem::path cache_file_name(const std::filesystem::path& dir, int n);
void write_cache(const BasisCache& cache, const std::filesystem::path& path);
BasisCache read_cache(const std::filesystem::path& path, std::optional<int> expected_n = std::nullopt);

}  // namespace zsph
