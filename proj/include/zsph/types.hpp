#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "zsph/error.hpp"

namespace zsph {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Matrix size N of the truncation together with the bracket scale
/// hbar = 2 / sqrt(N^2 - 1).
class Resolution {
 public:
  explicit Resolution(int n) : n_(n) {
    if (n < 2) throw Error(ErrorKind::invalid_resolution, "N must be >= 2, got " + std::to_string(n));
    hbar_ = 2.0 / std::sqrt(static_cast<double>(n) * n - 1.0);
  }

  int n() const { return n_; }
  double hbar() const { return hbar_; }

  friend bool operator==(const Resolution&, const Resolution&) = default;

 private:
  int n_;
  double hbar_;
};

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

inline Matrix skew_part(const Matrix& w) { return 0.5 * (w - w.adjoint()); }

}  // namespace zsph
