#pragma once

#include <vector>

#include "zsph/types.hpp"

namespace zsph {

/// Position helpers for the entries of matrix diagonal `offset`
/// (entry (i, j) lies on diagonal j - i). Entry k of a diagonal with
/// offset d >= 0 sits at (k, k + d); for d < 0 it sits at (k - d, k).
inline int diagonal_length(int n, int offset) { return n - (offset < 0 ? -offset : offset); }
inline int diagonal_row(int offset, int k) { return offset >= 0 ? k : k - offset; }
inline int diagonal_col(int offset, int k) { return offset >= 0 ? k + offset : k; }

/// Square matrix stored as a handful of nonzero diagonals. The basis
/// matrices T_lm, the spin generators, and noise fields are all of this form,
/// which makes commutators with a dense matrix O(N^2) per diagonal.
class BandedMatrix {
 public:
  struct Diagonal {
    int offset;
    Eigen::VectorXcd values;
  };

  BandedMatrix() = default;
  explicit BandedMatrix(int n) : n_(n) {}

  int size() const { return n_; }
  const std::vector<Diagonal>& diagonals() const { return diagonals_; }

  /// Adds `values` onto diagonal `offset`, merging with an existing one.
  void add_diagonal(int offset, const Eigen::VectorXcd& values);

  BandedMatrix scaled(Complex factor) const;
  BandedMatrix adjoint() const;
  Matrix dense() const;

  /// this * w
  Matrix multiply_left(const Matrix& w) const;
  /// [this, w]
  Matrix commutator(const Matrix& w) const;
  /// acc += factor * this
  void add_to(Matrix& acc, Complex factor = 1.0) const;

 private:
  int n_ = 0;
  std::vector<Diagonal> diagonals_;
};

}  // namespace zsph
