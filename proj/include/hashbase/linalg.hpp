// Copyright 2026 The hashbase Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hashbase {

/// Row-major dense matrix of doubles. All fitting math runs in 64-bit; the
/// binary32 boundary lives in `io` and `EmbeddingMatrix`.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  /// Zero-filled rows x cols matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of `values` (row-major). Throws on size mismatch or
  /// non-finite entries.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return values_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<const double> values() const noexcept { return values_; }

  std::vector<double> column(std::size_t c) const;
  DenseMatrix transpose() const;
  /// First `k` columns.
  DenseMatrix leading_columns(std::size_t k) const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
/// aᵀ·b without materializing the transpose.
DenseMatrix multiply_transposed(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_norm(const DenseMatrix& a);
/// max |QᵀQ − I| over all entries.
double orthonormality_error(const DenseMatrix& q);

struct SvdResult {
  DenseMatrix u;          // n x k
  std::vector<double> s;  // k, non-increasing
  DenseMatrix v;          // d x k, orthonormal columns
  int sweeps = 0;         // Jacobi sweeps used
};

struct SvdOptions {
  double tolerance = 1e-10;  // relative off-diagonal mass
  int max_sweeps = 100;
};

/// Top-k singular triplets of `x` (n x d), 1 <= k <= min(n, d).
///
/// Householder QR shrinks tall inputs to a d x d triangle, then one-sided
/// (Hestenes) Jacobi orthogonalizes its columns. Singular values keep high
/// relative accuracy since XᵀX is never formed. Each column of V is sign
/// normalized so that its largest-magnitude entry is positive. Columns of U
/// belonging to a zero singular value are left zero.
SvdResult truncated_svd(const DenseMatrix& x, std::size_t k, const SvdOptions& options = {});

/// rows x cols matrix of i.i.d. N(0, 1) draws from an mt19937_64 stream
/// seeded with `seed`, filled row-major.
DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);
inline DenseMatrix gaussian_matrix(std::size_t k, std::uint64_t seed) {
  return gaussian_matrix(k, k, seed);
}

/// Q factor of a square matrix with diag(R) > 0, so Gaussian input yields a
/// Haar-distributed orthogonal matrix.
DenseMatrix qr_orthogonal(const DenseMatrix& a);

/// Thin Q (m x n, m >= n) of a Householder QR with the same sign convention.
/// Throws kDegenerate when |R_jj| < 1e-12 * ||A||_F.
DenseMatrix orthonormal_columns(const DenseMatrix& a);

}  // namespace hashbase
