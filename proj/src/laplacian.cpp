#include "zsph/laplacian.hpp"

#include <algorithm>
#include <cmath>

namespace zsph {

Matrix apply_laplacian(const Matrix& w, const SpinGenerators& gen) {
  const int n = gen.size();
  if (w.rows() != n || w.cols() != n) {
    throw Error(ErrorKind::shape, "Laplacian expects " + std::to_string(n) + "x" + std::to_string(n) + " input");
  }
  const BandedMatrix sz = gen.sz_banded();
  const BandedMatrix sp = gen.splus_banded();
  const BandedMatrix sm = gen.sminus_banded();
  // ad_x^2 + ad_y^2 = (ad_+ ad_- + ad_- ad_+) / 2
  Matrix out = sz.commutator(sz.commutator(w));
  out += 0.5 * sp.commutator(sm.commutator(w));
  out += 0.5 * sm.commutator(sp.commutator(w));
  return -out;
}

Eigen::VectorXcd read_diagonal(const Matrix& w, int offset) {
  const int n = static_cast<int>(w.rows());
  Eigen::VectorXcd v(diagonal_length(n, offset));
  for (int k = 0; k < v.size(); ++k) v[k] = w(diagonal_row(offset, k), diagonal_col(offset, k));
  return v;
}

void write_diagonal(Matrix& w, int offset, const Eigen::VectorXcd& values) {
  for (int k = 0; k < values.size(); ++k) w(diagonal_row(offset, k), diagonal_col(offset, k)) = values[k];
}

namespace {

constexpr double kBandTolerance = 1e-13;
constexpr int kProbeSpacing = 5;

void factorize(LaplaceFactorization::Block& b) {
  // The operator is negative (semi)definite, so LDL^T needs no pivoting.
  const int n = static_cast<int>(b.main.size());
  const int rows = (b.offset == 0) ? n - 1 : n;
  b.d.assign(static_cast<std::size_t>(rows), 0.0);
  b.l.assign(static_cast<std::size_t>(rows > 0 ? rows - 1 : 0), 0.0);
  for (int k = 0; k < rows; ++k) {
    double dk = b.main[static_cast<std::size_t>(k)];
    if (k > 0) dk -= b.l[static_cast<std::size_t>(k - 1)] * b.off[static_cast<std::size_t>(k - 1)];
    if (!(std::abs(dk) > 0.0)) {
      throw Error(ErrorKind::internal_consistency, "singular Laplacian block at offset " + std::to_string(b.offset));
    }
    b.d[static_cast<std::size_t>(k)] = dk;
    if (k + 1 < rows) b.l[static_cast<std::size_t>(k)] = b.off[static_cast<std::size_t>(k)] / dk;
  }
}

}  // namespace

LaplaceFactorization build_factorization(Resolution resolution, const SpinGenerators& gen) {
  const int n = resolution.n();
  if (gen.size() != n) throw Error(ErrorKind::shape, "generators do not match resolution");

  std::vector<LaplaceFactorization::Block> blocks;
  blocks.reserve(static_cast<std::size_t>(2 * n - 1));
  for (int offset = -(n - 1); offset <= n - 1; ++offset) {
    const int len = diagonal_length(n, offset);
    LaplaceFactorization::Block b;
    b.offset = offset;
    b.main.assign(static_cast<std::size_t>(len), 0.0);
    b.off.assign(static_cast<std::size_t>(len - 1), 0.0);

    std::vector<double> lower(static_cast<std::size_t>(len > 0 ? len - 1 : 0), 0.0);
    for (int phase = 0; phase < std::min(kProbeSpacing, len); ++phase) {
      Matrix probe = Matrix::Zero(n, n);
      for (int k = phase; k < len; k += kProbeSpacing) probe(diagonal_row(offset, k), diagonal_col(offset, k)) = 1.0;
      const Matrix response = apply_laplacian(probe, gen);

      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (j - i != offset && std::abs(response(i, j)) > kBandTolerance) {
            throw Error(ErrorKind::internal_consistency,
                        "Laplacian couples diagonal " + std::to_string(offset) + " to " + std::to_string(j - i));
          }
        }
      }
      // Every position on the diagonal is within two slots of exactly one probe.
      for (int k = phase; k < len; k += kProbeSpacing) {
        for (int shift = -2; shift <= 2; ++shift) {
          const int p = k + shift;
          if (p < 0 || p >= len) continue;
          const Complex v = response(diagonal_row(offset, p), diagonal_col(offset, p));
          if (std::abs(v.imag()) > kBandTolerance) {
            throw Error(ErrorKind::internal_consistency, "Laplacian block is not real");
          }
          switch (shift) {
            case 0: b.main[static_cast<std::size_t>(k)] = v.real(); break;
            case 1: b.off[static_cast<std::size_t>(k)] = v.real(); break;
            case -1: lower[static_cast<std::size_t>(p)] = v.real(); break;
            default:
              if (std::abs(v) > kBandTolerance) {
                throw Error(ErrorKind::internal_consistency,
                            "Laplacian block at offset " + std::to_string(offset) + " is not tridiagonal");
              }
          }
        }
      }
    }
    for (int k = 0; k + 1 < len; ++k) {
      const double up = b.off[static_cast<std::size_t>(k)];
      if (std::abs(up - lower[static_cast<std::size_t>(k)]) > 1e-12 * (1.0 + std::abs(up))) {
        throw Error(ErrorKind::internal_consistency, "Laplacian block is not symmetric");
      }
    }

    factorize(b);
    blocks.push_back(std::move(b));
  }
  return LaplaceFactorization(resolution, std::move(blocks));
}

LaplaceFactorization::LaplaceFactorization(Resolution resolution, std::vector<Block> blocks)
    : resolution_(resolution), blocks_(std::move(blocks)) {
  if (blocks_.size() != static_cast<std::size_t>(2 * resolution_.n() - 1)) {
    throw Error(ErrorKind::internal_consistency, "one block per diagonal offset expected");
  }
}

Eigen::VectorXcd LaplaceFactorization::apply_block(int offset, const Eigen::VectorXcd& x) const {
  const Block& b = block(offset);
  const int len = static_cast<int>(b.main.size());
  if (x.size() != len) throw Error(ErrorKind::shape, "diagonal length mismatch");
  Eigen::VectorXcd y(len);
  for (int k = 0; k < len; ++k) {
    Complex acc = b.main[static_cast<std::size_t>(k)] * x[k];
    if (k > 0) acc += b.off[static_cast<std::size_t>(k - 1)] * x[k - 1];
    if (k + 1 < len) acc += b.off[static_cast<std::size_t>(k)] * x[k + 1];
    y[k] = acc;
  }
  return y;
}

Matrix LaplaceFactorization::apply(const Matrix& w) const {
  const int n = size();
  if (w.rows() != n || w.cols() != n) throw Error(ErrorKind::shape, "matrix size does not match factorization");
  Matrix out(n, n);
  for (int offset = -(n - 1); offset <= n - 1; ++offset) write_diagonal(out, offset, apply_block(offset, read_diagonal(w, offset)));
  return out;
}

Eigen::VectorXcd LaplaceFactorization::solve_block(int offset, const Eigen::VectorXcd& rhs) const {
  const Block& b = block(offset);
  const int len = static_cast<int>(b.main.size());
  if (rhs.size() != len) throw Error(ErrorKind::shape, "diagonal length mismatch");
  const int rows = static_cast<int>(b.d.size());
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(len);
  // Forward, diagonal, backward sweeps. Offset 0 pins its last unknown at zero;
  // the dropped equation is implied because the columns sum to zero.
  for (int k = 0; k < rows; ++k) {
    x[k] = rhs[k];
    if (k > 0) x[k] -= b.l[static_cast<std::size_t>(k - 1)] * x[k - 1];
  }
  for (int k = 0; k < rows; ++k) x[k] /= b.d[static_cast<std::size_t>(k)];
  for (int k = rows - 2; k >= 0; --k) x[k] -= b.l[static_cast<std::size_t>(k)] * x[k + 1];
  if (offset == 0) x.array() -= x.mean();
  return x;
}

Matrix solve_stream(const Matrix& w, const LaplaceFactorization& fact) {
  const int n = fact.size();
  if (w.rows() != n || w.cols() != n) throw Error(ErrorKind::shape, "matrix size does not match factorization");
  const double norm = w.norm();
  if (std::abs(w.trace()) > 1e-10 * norm) {
    throw Error(ErrorKind::zero_mean_violation, "stream solve needs a trace-free vorticity matrix");
  }
  Matrix p(n, n);
  for (int offset = -(n - 1); offset <= n - 1; ++offset) write_diagonal(p, offset, fact.solve_block(offset, read_diagonal(w, offset)));
  return p;
}

}  // namespace zsph
