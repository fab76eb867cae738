#include "zsph/banded.hpp"

namespace zsph {

void BandedMatrix::add_diagonal(int offset, const Eigen::VectorXcd& values) {
  if (values.size() != diagonal_length(n_, offset)) {
    throw Error(ErrorKind::shape, "diagonal length does not match offset");
  }
  for (auto& d : diagonals_) {
    if (d.offset == offset) {
      d.values += values;
      return;
    }
  }
  diagonals_.push_back({offset, values});
}

BandedMatrix BandedMatrix::scaled(Complex factor) const {
  BandedMatrix out(n_);
  for (const auto& d : diagonals_) out.diagonals_.push_back({d.offset, factor * d.values});
  return out;
}

BandedMatrix BandedMatrix::adjoint() const {
  BandedMatrix out(n_);
  for (const auto& d : diagonals_) out.diagonals_.push_back({-d.offset, d.values.conjugate()});
  return out;
}

Matrix BandedMatrix::dense() const {
  Matrix out = Matrix::Zero(n_, n_);
  add_to(out);
  return out;
}

void BandedMatrix::add_to(Matrix& acc, Complex factor) const {
  for (const auto& d : diagonals_) {
    for (int k = 0; k < d.values.size(); ++k) {
      acc(diagonal_row(d.offset, k), diagonal_col(d.offset, k)) += factor * d.values[k];
    }
  }
}

Matrix BandedMatrix::multiply_left(const Matrix& w) const {
  if (w.rows() != n_ || w.cols() != n_) throw Error(ErrorKind::shape, "banded product size mismatch");
  Matrix out = Matrix::Zero(n_, n_);
  for (const auto& d : diagonals_) {
    const int len = static_cast<int>(d.values.size());
    if (d.offset >= 0) {
      out.topRows(len).noalias() += d.values.asDiagonal() * w.bottomRows(len);
    } else {
      out.bottomRows(len).noalias() += d.values.asDiagonal() * w.topRows(len);
    }
  }
  return out;
}

Matrix BandedMatrix::commutator(const Matrix& w) const {
  if (w.rows() != n_ || w.cols() != n_) throw Error(ErrorKind::shape, "banded commutator size mismatch");
  Matrix out = Matrix::Zero(n_, n_);
  for (const auto& d : diagonals_) {
    const int len = static_cast<int>(d.values.size());
    if (d.offset >= 0) {
      // (A W)(k, :) = a_k W(k + d, :)   and   (W A)(:, k + d) = W(:, k) a_k
      out.topRows(len).noalias() += d.values.asDiagonal() * w.bottomRows(len);
      out.rightCols(len).noalias() -= w.leftCols(len) * d.values.asDiagonal();
    } else {
      out.bottomRows(len).noalias() += d.values.asDiagonal() * w.topRows(len);
      out.leftCols(len).noalias() -= w.rightCols(len) * d.values.asDiagonal();
    }
  }
  return out;
}

}  // namespace zsph
