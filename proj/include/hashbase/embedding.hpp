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
#include <span>
#include <vector>

#include "hashbase/linalg.hpp"

namespace hashbase {

/// n x d matrix of encoder outputs, stored as binary32 row-major. This is the
/// storage boundary; anything that fits a model widens to double first.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  /// Empty matrix with a known width.
  explicit EmbeddingMatrix(std::size_t d) : d_(d) {}
  /// Throws on size mismatch or a non-finite value (reported with its row).
  EmbeddingMatrix(std::size_t n, std::size_t d, std::vector<float> values);

  static EmbeddingMatrix from_dense(const DenseMatrix& m);

  std::size_t rows() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }
  bool empty() const noexcept { return n_ == 0; }

  std::span<const float> row(std::size_t i) const { return {values_.data() + i * d_, d_}; }
  std::span<const float> values() const noexcept { return values_; }

  /// Rows in the order given by `indices`.
  EmbeddingMatrix select(std::span<const std::size_t> indices) const;
  DenseMatrix to_dense() const;

  bool operator==(const EmbeddingMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<float> values_;
};

}  // namespace hashbase
