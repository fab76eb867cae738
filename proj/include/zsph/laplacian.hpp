#pragma once

#include <vector>

#include "zsph/quantization.hpp"

namespace zsph {

/// Hoppe-Yau Laplacian -sum_i [S_i, [S_i, W]], evaluated with the banded
/// generators in O(N^2).
Matrix apply_laplacian(const Matrix& w, const SpinGenerators& gen);

/// The Laplacian maps each matrix diagonal to itself and acts on it as a
/// real symmetric tridiagonal matrix. This holds one LDL^T factorization per
/// diagonal offset m = -(N-1)..(N-1).
class LaplaceFactorization {
 public:
  struct Block {
    int offset = 0;
    std::vector<double> main;  // length n
    std::vector<double> off;   // length n - 1 (symmetric sub/super diagonal)
    // LDL^T factors; for offset 0 the last unknown is pinned, so these cover n - 1 rows.
    std::vector<double> d;
    std::vector<double> l;
  };

  LaplaceFactorization(Resolution resolution, std::vector<Block> blocks);

  const Resolution& resolution() const { return resolution_; }
  int size() const { return resolution_.n(); }
  const Block& block(int offset) const { return blocks_[static_cast<std::size_t>(offset + size() - 1)]; }

  /// Forward tridiagonal operator on diagonal `offset`.
  Eigen::VectorXcd apply_block(int offset, const Eigen::VectorXcd& x) const;
  /// Forward operator on a whole matrix, diagonal by diagonal.
  Matrix apply(const Matrix& w) const;
  /// Solves block(offset) x = rhs; for offset 0 the solution is trace-free.
  Eigen::VectorXcd solve_block(int offset, const Eigen::VectorXcd& rhs) const;

 private:
  Resolution resolution_;
  std::vector<Block> blocks_;
};

/// Probes the Laplacian with combs of single-entry matrices, reads off the
/// tridiagonal coupling of every diagonal, and factorizes. Any response
/// outside the tridiagonal band above 1e-13 raises internal-consistency.
LaplaceFactorization build_factorization(Resolution resolution, const SpinGenerators& gen);

/// Unique trace-free P with Laplacian(P) = W.
Matrix solve_stream(const Matrix& w, const LaplaceFactorization& fact);

Eigen::VectorXcd read_diagonal(const Matrix& w, int offset);
void write_diagonal(Matrix& w, int offset, const Eigen::VectorXcd& values);

}  // namespace zsph
