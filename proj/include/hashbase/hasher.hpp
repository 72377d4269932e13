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

#include "hashbase/embedding.hpp"
#include "hashbase/index.hpp"
#include "hashbase/linalg.hpp"

namespace hashbase {

struct HashFlags {
  bool l2_normalize = true;
  bool mean_center = true;

  bool operator==(const HashFlags&) const = default;
};

/// Fitted hashing model: u = R · Vᵀ · pre(x), p = σ(u), b = [p > 0.5].
///
/// Immutable once built; safe to share across threads.
class HashModel {
 public:
  HashModel() = default;

  /// Validates shapes, k <= d, a zero mean when centering is off, a mean
  /// inside the unit ball when L2 normalization is on, and orthonormality
  /// of V (1e-6) and R (1e-5). The tolerances admit binary32 round-trips.
  static HashModel from_parts(std::vector<double> mean, DenseMatrix basis, DenseMatrix rotation,
                              std::uint64_t seed, HashFlags flags);

  std::size_t dim() const noexcept { return basis_.rows(); }
  std::size_t bits() const noexcept { return basis_.cols(); }
  const std::vector<double>& mean() const noexcept { return mean_; }
  /// V, d x k.
  const DenseMatrix& basis() const noexcept { return basis_; }
  /// R, k x k.
  const DenseMatrix& rotation() const noexcept { return rotation_; }
  std::uint64_t seed() const noexcept { return seed_; }
  HashFlags flags() const noexcept { return flags_; }

  /// Same basis, R redrawn from `seed`.
  HashModel with_seed(std::uint64_t seed) const;
  /// Same basis, caller-supplied rotation.
  HashModel with_rotation(DenseMatrix rotation, std::uint64_t seed) const;

  bool operator==(const HashModel&) const = default;

 private:
  std::vector<double> mean_;
  DenseMatrix basis_;
  DenseMatrix rotation_;
  std::uint64_t seed_ = 0;
  HashFlags flags_;
};

/// Principal directions of a preprocessed training matrix, kept separate
/// from the rotation so multi-seed runs refit only R.
struct PcaBasis {
  HashFlags flags;
  std::vector<double> mean;              // zeros when centering is off
  DenseMatrix components;                // d x r, orthonormal columns
  std::vector<double> singular_values;   // r, non-increasing
  double total_energy = 0.0;             // ||Xc||_F^2

  /// Fraction of ||Xc||_F^2 carried by the leading k components.
  double explained_variance(std::size_t k) const;
};

/// L2 normalization (per flag) of every row, widened to double.
DenseMatrix preprocess_rows(const EmbeddingMatrix& x, const HashFlags& flags);

/// Fits mean and the top `components` principal directions.
/// Requires n >= 2 and 1 <= components <= min(n, d).
PcaBasis fit_pca(const EmbeddingMatrix& train, std::size_t components, HashFlags flags = {});

/// Model from the leading k components of `pca` and R = QR(gaussian(k, seed)).
HashModel model_from_pca(const PcaBasis& pca, std::size_t k, std::uint64_t seed);

HashModel fit(const EmbeddingMatrix& train, std::size_t k, std::uint64_t seed,
              HashFlags flags = {});

/// Numerically stable logistic function. Never returns exactly 0.5 for a
/// nonzero argument, so thresholding at 0.5 agrees with the sign of u.
double sigmoid(double u);

/// pre(x): L2 normalization then mean subtraction, per model flags.
std::vector<double> preprocess(const HashModel& model, std::span<const float> x);
std::vector<double> preprocess(const HashModel& model, std::span<const double> x);

/// z = Vᵀ pre(x).
std::vector<double> reduce(const HashModel& model, std::span<const float> x);
/// u = R z.
std::vector<double> logits(const HashModel& model, std::span<const float> x);
std::vector<double> logits(const HashModel& model, std::span<const double> x);

BitProbabilities project(const HashModel& model, std::span<const float> x);
BitProbabilities project(const HashModel& model, std::span<const double> x);

/// bit_j = 1 iff p_j > 0.5.
BinaryCode binarize(const BitProbabilities& p);

std::vector<BitProbabilities> project_batch(const HashModel& model, const EmbeddingMatrix& x);
/// Rows of z for every input row (n x k).
DenseMatrix reduce_batch(const HashModel& model, const EmbeddingMatrix& x);
CodeDatabase encode_batch(const HashModel& model, const EmbeddingMatrix& x);

}  // namespace hashbase
