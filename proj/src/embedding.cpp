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

#include "hashbase/embedding.hpp"

#include <cmath>
#include <string>

#include "hashbase/error.hpp"

namespace hashbase {

EmbeddingMatrix::EmbeddingMatrix(std::size_t n, std::size_t d, std::vector<float> values)
    : n_(n), d_(d), values_(std::move(values)) {
  if (values_.size() != n_ * d_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "EmbeddingMatrix: expected " + std::to_string(n_ * d_) + " values, got " +
                    std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::kNonFinite,
                  "EmbeddingMatrix: non-finite value in row " + std::to_string(i / d_));
    }
  }
}

EmbeddingMatrix EmbeddingMatrix::from_dense(const DenseMatrix& m) {
  std::vector<float> values(m.values().begin(), m.values().end());
  return EmbeddingMatrix(m.rows(), m.cols(), std::move(values));
}

EmbeddingMatrix EmbeddingMatrix::select(std::span<const std::size_t> indices) const {
  std::vector<float> values;
  values.reserve(indices.size() * d_);
  for (std::size_t i : indices) {
    if (i >= n_) throw Error(ErrorCode::kRange, "EmbeddingMatrix::select: row out of range");
    const auto r = row(i);
    values.insert(values.end(), r.begin(), r.end());
  }
  EmbeddingMatrix out(d_);
  out.n_ = indices.size();
  out.values_ = std::move(values);
  return out;
}

DenseMatrix EmbeddingMatrix::to_dense() const {
  std::vector<double> values(values_.begin(), values_.end());
  return DenseMatrix(n_, d_, std::move(values));
}

}  // namespace hashbase
