#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "zsph/quantization.hpp"

namespace zsph {

/// Gaussian coefficients on degrees 1..l_max with the real-field symmetry,
/// scaled to unit enstrophy. Deterministic in `seed`.
HarmonicCoefficients random_initial_condition(std::uint64_t seed, int l_max = 10);

/// Real field on a uniform colatitude/longitude grid: theta_i = (i + 1/2) pi / nlat,
/// phi_j = 2 pi j / nlon. Values are latitude-major.
struct GridField {
  int nlat = 0;
  int nlon = 0;
  std::vector<double> values;

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * nlon + j]; }
  double theta(int i) const;
  double phi(int j) const;
};

/// Fully normalized associated Legendre values Pbar_lm(cos theta) with the
/// Condon-Shortley phase, so that Y_lm = Pbar_lm e^{i m phi} has unit L2 norm
/// on the sphere. Returned in HarmonicCoefficients layout for m >= 0.
std::vector<double> normalized_legendre(int l_max, double theta);

struct Synthesis {
  GridField field;
  double max_imaginary = 0.0;  // largest discarded imaginary part
};

/// w(theta, phi) = sum_lm w_lm Y_lm(theta, phi).
Synthesis synthesize_grid(const HarmonicCoefficients& coeffs, int nlat, int nlon);

void write_grid_file(const std::filesystem::path& path, const GridField& grid, double time);
GridField read_grid_file(const std::filesystem::path& path, double* time = nullptr);

/// Plain-text coefficient state: header `l,m,re,im`, one row per (l, m).
void write_coefficients(const std::filesystem::path& path, const HarmonicCoefficients& coeffs);
HarmonicCoefficients read_coefficients(const std::filesystem::path& path);

}  // namespace zsph
