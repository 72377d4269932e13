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

#include "hashbase/hasher.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hashbase/error.hpp"
#include "hashbase/parallel.hpp"

namespace hashbase {

namespace {

constexpr double kBasisTolerance = 1e-6;
constexpr double kRotationTolerance = 1e-5;

template <class T>
std::vector<double> preprocess_impl(const HashModel& model, std::span<const T> x) {
  if (x.size() != model.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "input has dimension " + std::to_string(x.size()) +
                                                   ", model expects " +
                                                   std::to_string(model.dim()));
  }
  std::vector<double> out(x.begin(), x.end());
  for (double v : out) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "input vector has non-finite entry");
  }
  const HashFlags flags = model.flags();
  if (flags.l2_normalize) {
    double norm = 0.0;
    for (double v : out) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      throw Error(ErrorCode::kDegenerate, "cannot L2-normalize a zero vector");
    }
    for (double& v : out) v /= norm;
  }
  if (flags.mean_center) {
    const auto& mean = model.mean();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= mean[i];
  }
  return out;
}

std::vector<double> reduce_preprocessed(const HashModel& model, const std::vector<double>& x) {
  const DenseMatrix& v = model.basis();
  std::vector<double> z(model.bits(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const auto row = v.row(i);
    for (std::size_t c = 0; c < z.size(); ++c) z[c] += xi * row[c];
  }
  return z;
}

std::vector<double> rotate(const HashModel& model, const std::vector<double>& z) {
  const DenseMatrix& r = model.rotation();
  std::vector<double> u(z.size(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto row = r.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) s += row[j] * z[j];
    u[i] = s;
  }
  return u;
}

BitProbabilities to_probabilities(const std::vector<double>& u) {
  BitProbabilities p;
  p.values.resize(u.size());
  std::transform(u.begin(), u.end(), p.values.begin(), sigmoid);
  return p;
}

}  // namespace

HashModel HashModel::from_parts(std::vector<double> mean, DenseMatrix basis, DenseMatrix rotation,
                                std::uint64_t seed, HashFlags flags) {
  const std::size_t d = basis.rows();
  const std::size_t k = basis.cols();
  if (k < 1 || k > d) {
    throw Error(ErrorCode::kRange, "HashModel: need 1 <= k <= d, got k=" + std::to_string(k) +
                                       " d=" + std::to_string(d));
  }
  if (mean.size() != d) {
    throw Error(ErrorCode::kDimensionMismatch, "HashModel: mean length differs from d");
  }
  if (rotation.rows() != k || rotation.cols() != k) {
    throw Error(ErrorCode::kDimensionMismatch, "HashModel: rotation must be k x k");
  }
  double mean_norm = 0.0;
  for (double m : mean) {
    if (!std::isfinite(m)) throw Error(ErrorCode::kNonFinite, "HashModel: non-finite mean");
    if (!flags.mean_center && m != 0.0) {
      throw Error(ErrorCode::kIntegrity, "HashModel: nonzero mean with centering disabled");
    }
    mean_norm += m * m;
  }
  // The mean of unit vectors lies in the unit ball.
  if (flags.l2_normalize && std::sqrt(mean_norm) > 1.0 + 1e-6) {
    throw Error(ErrorCode::kIntegrity, "HashModel: mean norm exceeds 1 with L2 normalization");
  }
  const double basis_err = orthonormality_error(basis);
  if (!(basis_err <= kBasisTolerance)) {
    throw Error(ErrorCode::kIntegrity,
                "HashModel: basis columns not orthonormal (error " + std::to_string(basis_err) + ")");
  }
  const double rot_err = orthonormality_error(rotation);
  if (!(rot_err <= kRotationTolerance)) {
    throw Error(ErrorCode::kIntegrity,
                "HashModel: rotation not orthogonal (error " + std::to_string(rot_err) + ")");
  }
  HashModel model;
  model.mean_ = std::move(mean);
  model.basis_ = std::move(basis);
  model.rotation_ = std::move(rotation);
  model.seed_ = seed;
  model.flags_ = flags;
  return model;
}

HashModel HashModel::with_seed(std::uint64_t seed) const {
  return with_rotation(qr_orthogonal(gaussian_matrix(bits(), seed)), seed);
}

HashModel HashModel::with_rotation(DenseMatrix rotation, std::uint64_t seed) const {
  if (rotation.rows() != bits() || rotation.cols() != bits()) {
    throw Error(ErrorCode::kDimensionMismatch, "with_rotation: rotation must be k x k");
  }
  const double err = orthonormality_error(rotation);
  if (!(err <= kRotationTolerance)) {
    throw Error(ErrorCode::kIntegrity, "with_rotation: rotation not orthogonal");
  }
  HashModel out = *this;
  out.rotation_ = std::move(rotation);
  out.seed_ = seed;
  return out;
}

double PcaBasis::explained_variance(std::size_t k) const {
  if (total_energy <= 0.0) return 0.0;
  double kept = 0.0;
  for (std::size_t i = 0; i < std::min(k, singular_values.size()); ++i) {
    kept += singular_values[i] * singular_values[i];
  }
  return kept / total_energy;
}

DenseMatrix preprocess_rows(const EmbeddingMatrix& x, const HashFlags& flags) {
  DenseMatrix out = x.to_dense();
  if (!flags.l2_normalize) return out;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    double norm = 0.0;
    for (double v : row) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      throw Error(ErrorCode::kDegenerate,
                  "cannot L2-normalize zero embedding at row " + std::to_string(i));
    }
    for (double& v : row) v /= norm;
  }
  return out;
}

PcaBasis fit_pca(const EmbeddingMatrix& train, std::size_t components, HashFlags flags) {
  const std::size_t n = train.rows();
  const std::size_t d = train.dim();
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "fit: need at least 2 training rows, got " + std::to_string(n));
  }
  if (components < 1 || components > std::min(n, d)) {
    throw Error(ErrorCode::kRange, "fit: k=" + std::to_string(components) +
                                       " outside [1, min(n, d)=" +
                                       std::to_string(std::min(n, d)) + "]");
  }
  DenseMatrix x = preprocess_rows(train, flags);
  PcaBasis pca;
  pca.flags = flags;
  pca.mean.assign(d, 0.0);
  if (flags.mean_center) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = x.row(i);
      for (std::size_t j = 0; j < d; ++j) pca.mean[j] += row[j];
    }
    for (double& m : pca.mean) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = x.row(i);
      for (std::size_t j = 0; j < d; ++j) row[j] -= pca.mean[j];
    }
  }
  for (double v : x.values()) pca.total_energy += v * v;
  SvdResult svd = truncated_svd(x, components);
  pca.components = std::move(svd.v);
  pca.singular_values = std::move(svd.s);
  return pca;
}

HashModel model_from_pca(const PcaBasis& pca, std::size_t k, std::uint64_t seed) {
  if (k < 1 || k > pca.components.cols()) {
    throw Error(ErrorCode::kRange, "model_from_pca: k=" + std::to_string(k) +
                                       " exceeds fitted components " +
                                       std::to_string(pca.components.cols()));
  }
  return HashModel::from_parts(pca.mean, pca.components.leading_columns(k),
                               qr_orthogonal(gaussian_matrix(k, seed)), seed, pca.flags);
}

HashModel fit(const EmbeddingMatrix& train, std::size_t k, std::uint64_t seed, HashFlags flags) {
  return model_from_pca(fit_pca(train, k, flags), k, seed);
}

double sigmoid(double u) {
  double p;
  if (u >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-u));
  } else {
    const double e = std::exp(u);
    p = e / (1.0 + e);
  }
  // For |u| below about 1e-16 the quotient rounds to 0.5; step one ulp off
  // it so [sigmoid(u) > 0.5] == [u > 0] holds for every finite u.
  if (p == 0.5 && u != 0.0) p = std::nextafter(0.5, u > 0.0 ? 1.0 : 0.0);
  return p;
}

std::vector<double> preprocess(const HashModel& model, std::span<const float> x) {
  return preprocess_impl(model, x);
}

std::vector<double> preprocess(const HashModel& model, std::span<const double> x) {
  return preprocess_impl(model, x);
}

std::vector<double> reduce(const HashModel& model, std::span<const float> x) {
  return reduce_preprocessed(model, preprocess(model, x));
}

std::vector<double> logits(const HashModel& model, std::span<const float> x) {
  return rotate(model, reduce_preprocessed(model, preprocess(model, x)));
}

std::vector<double> logits(const HashModel& model, std::span<const double> x) {
  return rotate(model, reduce_preprocessed(model, preprocess(model, x)));
}

BitProbabilities project(const HashModel& model, std::span<const float> x) {
  return to_probabilities(logits(model, x));
}

BitProbabilities project(const HashModel& model, std::span<const double> x) {
  return to_probabilities(logits(model, x));
}

BinaryCode binarize(const BitProbabilities& p) {
  BinaryCode code(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p.values[j] > 0.5) code.set(j);
  }
  return code;
}

std::vector<BitProbabilities> project_batch(const HashModel& model, const EmbeddingMatrix& x) {
  if (x.dim() != model.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "project_batch: data has dimension " +
                                                   std::to_string(x.dim()) + ", model expects " +
                                                   std::to_string(model.dim()));
  }
  std::vector<BitProbabilities> out(x.rows());
  parallel_for(x.rows(), [&](std::size_t i) { out[i] = project(model, x.row(i)); });
  return out;
}

DenseMatrix reduce_batch(const HashModel& model, const EmbeddingMatrix& x) {
  if (x.dim() != model.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "reduce_batch: dimension mismatch");
  }
  DenseMatrix out(x.rows(), model.bits());
  parallel_for(x.rows(), [&](std::size_t i) {
    const std::vector<double> z = reduce(model, x.row(i));
    std::copy(z.begin(), z.end(), out.row(i).begin());
  });
  return out;
}

CodeDatabase encode_batch(const HashModel& model, const EmbeddingMatrix& x) {
  if (x.dim() != model.dim() && !(x.empty() && x.dim() == 0)) {
    throw Error(ErrorCode::kDimensionMismatch, "encode_batch: data has dimension " +
                                                   std::to_string(x.dim()) + ", model expects " +
                                                   std::to_string(model.dim()));
  }
  const std::size_t words = words_for_bits(model.bits());
  std::vector<std::uint64_t> packed(x.rows() * words, 0);
  parallel_for(x.rows(), [&](std::size_t i) {
    const BinaryCode code = binarize(project(model, x.row(i)));
    std::copy(code.words().begin(), code.words().end(), packed.begin() + i * words);
  });
  return CodeDatabase(x.rows(), model.bits(), std::move(packed));
}

}  // namespace hashbase
