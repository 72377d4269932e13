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

#include "hashbase/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "hashbase/error.hpp"

namespace hashbase {

namespace {

// Column-major scratch storage used by the factorizations; columns are
// contiguous so Householder updates and Jacobi rotations stream through
// memory.
struct ColumnMajor {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  ColumnMajor(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double* col(std::size_t j) { return data.data() + j * rows; }
  const double* col(std::size_t j) const { return data.data() + j * rows; }
  double& at(std::size_t i, std::size_t j) { return data[j * rows + i]; }
  double at(std::size_t i, std::size_t j) const { return data[j * rows + i]; }
};

ColumnMajor to_column_major(const DenseMatrix& a) {
  ColumnMajor out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a(i, j);
  }
  return out;
}

DenseMatrix to_dense(const ColumnMajor& a) {
  DenseMatrix out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) out(i, j) = a.at(i, j);
  }
  return out;
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::kNonFinite,
                  std::string(what) + ": non-finite value at flat index " + std::to_string(i));
    }
  }
}

// In-place Householder QR (LAPACK geqrf layout): R in the upper triangle,
// reflector tails below the diagonal, scalars in `tau`. Requires rows >= cols.
std::vector<double> householder_qr(ColumnMajor& a) {
  const std::size_t m = a.rows;
  const std::size_t n = a.cols;
  std::vector<double> tau(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double* x = a.col(j);
    const double alpha = x[j];
    double tail = 0.0;
    for (std::size_t i = j + 1; i < m; ++i) tail += x[i] * x[i];
    if (tail == 0.0) {
      tau[j] = 0.0;
      continue;
    }
    const double beta = -std::copysign(std::sqrt(alpha * alpha + tail), alpha);
    tau[j] = (beta - alpha) / beta;
    const double scale = 1.0 / (alpha - beta);
    for (std::size_t i = j + 1; i < m; ++i) x[i] *= scale;
    x[j] = beta;
    for (std::size_t c = j + 1; c < n; ++c) {
      double* y = a.col(c);
      double w = y[j];
      for (std::size_t i = j + 1; i < m; ++i) w += x[i] * y[i];
      w *= tau[j];
      y[j] -= w;
      for (std::size_t i = j + 1; i < m; ++i) y[i] -= w * x[i];
    }
  }
  return tau;
}

// Accumulates the thin Q (m x n) from the reflectors left by householder_qr.
ColumnMajor form_thin_q(const ColumnMajor& factored, const std::vector<double>& tau) {
  const std::size_t m = factored.rows;
  const std::size_t n = factored.cols;
  ColumnMajor q(m, n);
  for (std::size_t j = 0; j < n; ++j) q.at(j, j) = 1.0;
  for (std::size_t jj = n; jj-- > 0;) {
    if (tau[jj] == 0.0) continue;
    const double* v = factored.col(jj);
    for (std::size_t c = jj; c < n; ++c) {
      double* y = q.col(c);
      double w = y[jj];
      for (std::size_t i = jj + 1; i < m; ++i) w += v[i] * y[i];
      w *= tau[jj];
      y[jj] -= w;
      for (std::size_t i = jj + 1; i < m; ++i) y[i] -= w * v[i];
    }
  }
  return q;
}

// One-sided Jacobi: rotates column pairs of `w` until all are mutually
// orthogonal to `tolerance` (relative), applying the same rotations to `v`.
// Returns the number of sweeps.
int one_sided_jacobi(ColumnMajor& w, ColumnMajor& v, const SvdOptions& options) {
  constexpr double kSkip = 1e-15;
  const std::size_t m = w.rows;
  const std::size_t c = w.cols;
  std::vector<double> norms(c);
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    for (std::size_t j = 0; j < c; ++j) norms[j] = dot(w.col(j), w.col(j), m);
    double max_off = 0.0;
    for (std::size_t p = 0; p + 1 < c; ++p) {
      for (std::size_t q = p + 1; q < c; ++q) {
        const double alpha = norms[p];
        const double beta = norms[q];
        if (alpha == 0.0 || beta == 0.0) continue;
        double* wp = w.col(p);
        double* wq = w.col(q);
        const double gamma = dot(wp, wq, m);
        const double rel = std::abs(gamma) / std::sqrt(alpha * beta);
        max_off = std::max(max_off, rel);
        if (rel <= kSkip) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double a = wp[i];
          const double b = wq[i];
          wp[i] = cs * a - sn * b;
          wq[i] = sn * a + cs * b;
        }
        double* vp = v.col(p);
        double* vq = v.col(q);
        for (std::size_t i = 0; i < v.rows; ++i) {
          const double a = vp[i];
          const double b = vq[i];
          vp[i] = cs * a - sn * b;
          vq[i] = sn * a + cs * b;
        }
        norms[p] = alpha - t * gamma;
        norms[q] = beta + t * gamma;
      }
    }
    if (max_off <= options.tolerance) return sweep;
  }
  throw Error(ErrorCode::kConvergence,
              "truncated_svd: Jacobi did not converge after " +
                  std::to_string(options.max_sweeps) + " sweeps");
}

// Fills `target` with a unit vector orthogonal to `basis` (two passes of
// Gram-Schmidt over the standard basis).
std::vector<double> orthogonal_complement_vector(const std::vector<std::vector<double>>& basis,
                                                 std::size_t dim) {
  for (std::size_t e = 0; e < dim; ++e) {
    std::vector<double> cand(dim, 0.0);
    cand[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double proj = dot(cand.data(), b.data(), dim);
        for (std::size_t i = 0; i < dim; ++i) cand[i] -= proj * b[i];
      }
    }
    const double norm = std::sqrt(dot(cand.data(), cand.data(), dim));
    if (norm > 0.5) {
      for (double& x : cand) x /= norm;
      return cand;
    }
  }
  throw Error(ErrorCode::kDegenerate, "truncated_svd: cannot complete orthonormal basis");
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "DenseMatrix: " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                    " needs " + std::to_string(rows_ * cols_) + " values, got " +
                    std::to_string(values_.size()));
  }
  require_finite(values_, "DenseMatrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

std::vector<double> DenseMatrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, c);
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

DenseMatrix DenseMatrix::leading_columns(std::size_t k) const {
  if (k > cols_) {
    throw Error(ErrorCode::kRange, "leading_columns: k exceeds column count");
  }
  DenseMatrix out(rows_, k);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < k; ++j) out(i, j) = (*this)(i, j);
  }
  return out;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "multiply: inner dimensions differ");
  }
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double s = a(i, l);
      if (s == 0.0) continue;
      const auto src = b.row(l);
      for (std::size_t j = 0; j < b.cols(); ++j) dst[j] += s * src[j];
    }
  }
  return out;
}

DenseMatrix multiply_transposed(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "multiply_transposed: row counts differ");
  }
  DenseMatrix out(a.cols(), b.cols());
  for (std::size_t l = 0; l < a.rows(); ++l) {
    const auto ar = a.row(l);
    const auto br = b.row(l);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double s = ar[i];
      if (s == 0.0) continue;
      auto dst = out.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) dst[j] += s * br[j];
    }
  }
  return out;
}

double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (double x : a.values()) s += x * x;
  return std::sqrt(s);
}

double orthonormality_error(const DenseMatrix& q) {
  const DenseMatrix g = multiply_transposed(q, q);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

SvdResult truncated_svd(const DenseMatrix& x, std::size_t k, const SvdOptions& options) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (k < 1 || k > std::min(n, d)) {
    throw Error(ErrorCode::kRange, "truncated_svd: k=" + std::to_string(k) +
                                       " outside [1, min(n, d)=" +
                                       std::to_string(std::min(n, d)) + "]");
  }
  require_finite(x.values(), "truncated_svd");

  const std::size_t r = std::min(n, d);
  std::vector<double> sigma(r);
  std::vector<std::vector<double>> right(r, std::vector<double>(d));
  std::vector<std::vector<double>> left(r, std::vector<double>(n, 0.0));
  int sweeps = 0;

  if (n >= d) {
    ColumnMajor w = to_column_major(x);
    if (n > d) {
      householder_qr(w);
      ColumnMajor tri(d, d);
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i <= j; ++i) tri.at(i, j) = w.at(i, j);
      }
      w = std::move(tri);
    }
    ColumnMajor v(d, d);
    for (std::size_t j = 0; j < d; ++j) v.at(j, j) = 1.0;
    sweeps = one_sided_jacobi(w, v, options);
    for (std::size_t j = 0; j < d; ++j) {
      sigma[j] = std::sqrt(dot(w.col(j), w.col(j), w.rows));
      std::copy(v.col(j), v.col(j) + d, right[j].begin());
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (sigma[j] == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) {
        left[j][i] = dot(x.row(i).data(), right[j].data(), d) / sigma[j];
      }
    }
  } else {
    // Wide input: orthogonalize the columns of Xᵀ (the rows of X).
    ColumnMajor w(d, n);
    for (std::size_t i = 0; i < n; ++i) std::copy(x.row(i).begin(), x.row(i).end(), w.col(i));
    ColumnMajor v(n, n);
    for (std::size_t j = 0; j < n; ++j) v.at(j, j) = 1.0;
    sweeps = one_sided_jacobi(w, v, options);
    for (std::size_t j = 0; j < n; ++j) {
      sigma[j] = std::sqrt(dot(w.col(j), w.col(j), d));
      std::copy(v.col(j), v.col(j) + n, left[j].begin());
    }
    const double smax = *std::max_element(sigma.begin(), sigma.end());
    const double floor = smax * 1e-15 * static_cast<double>(d);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });
    std::vector<std::vector<double>> accepted;
    for (std::size_t j : order) {
      if (sigma[j] > floor && sigma[j] > 0.0) {
        for (std::size_t i = 0; i < d; ++i) right[j][i] = w.at(i, j) / sigma[j];
      } else {
        right[j] = orthogonal_complement_vector(accepted, d);
      }
      accepted.push_back(right[j]);
    }
  }

  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  SvdResult result;
  result.sweeps = sweeps;
  result.s.resize(k);
  result.u = DenseMatrix(n, k);
  result.v = DenseMatrix(d, k);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t j = order[c];
    result.s[c] = sigma[j];
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < d; ++i) {
      if (std::abs(right[j][i]) > std::abs(right[j][pivot])) pivot = i;
    }
    const double sign = right[j][pivot] < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < d; ++i) result.v(i, c) = sign * right[j][i];
    for (std::size_t i = 0; i < n; ++i) result.u(i, c) = sign * left[j][i];
  }
  return result;
}

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> values(rows * cols);
  for (double& v : values) v = normal(engine);
  return DenseMatrix(rows, cols, std::move(values));
}

DenseMatrix qr_orthogonal(const DenseMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "qr_orthogonal: matrix must be square");
  }
  return orthonormal_columns(a);
}

DenseMatrix orthonormal_columns(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (n == 0 || m < n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "orthonormal_columns: need rows >= cols >= 1, got " + std::to_string(m) + "x" +
                    std::to_string(n));
  }
  require_finite(a.values(), "orthonormal_columns");
  const double scale = frobenius_norm(a);
  ColumnMajor f = to_column_major(a);
  const std::vector<double> tau = householder_qr(f);
  for (std::size_t j = 0; j < n; ++j) {
    if (!(std::abs(f.at(j, j)) >= 1e-12 * scale) || scale == 0.0) {
      throw Error(ErrorCode::kDegenerate,
                  "orthonormal_columns: rank-deficient input (|R_" + std::to_string(j) + "," +
                      std::to_string(j) + "| below 1e-12*||A||)");
    }
  }
  ColumnMajor q = form_thin_q(f, tau);
  for (std::size_t j = 0; j < n; ++j) {
    if (f.at(j, j) < 0.0) {
      double* col = q.col(j);
      for (std::size_t i = 0; i < m; ++i) col[i] = -col[i];
    }
  }
  return to_dense(q);
}

}  // namespace hashbase
