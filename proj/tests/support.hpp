#pragma once

#include <cmath>
#include <map>
#include <random>

#include "zsph/dynamics.hpp"

namespace zsph::test {

// One discretization per N for the whole test binary.
inline const Discretization& disc(int n) {
  static std::map<int, Discretization> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, Discretization::build(n)).first;
  return it->second;
}

// Random real-field coefficients on degrees 1..lmax.
inline HarmonicCoefficients random_coefficients(std::mt19937_64& rng, int lmax) {
  std::normal_distribution<double> g;
  HarmonicCoefficients c(lmax);
  for (int l = 1; l <= lmax; ++l) {
    c.at(l, 0) = g(rng);
    for (int m = 1; m <= l; ++m) {
      c.at(l, m) = Complex(g(rng), g(rng));
      c.at(l, -m) = (m % 2 ? -1.0 : 1.0) * std::conj(c.at(l, m));
    }
  }
  return c;
}

// Random traceless skew-Hermitian matrix with every degree populated.
inline Matrix random_vorticity(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  Matrix w = skew_part(a);
  w.diagonal().array() -= w.trace() / static_cast<double>(n);
  return w;
}

inline Matrix random_unitary(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(n, n);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace zsph::test
