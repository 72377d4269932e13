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
#include <vector>

#include "hashbase/embedding.hpp"
#include "hashbase/eval.hpp"
#include "hashbase/linalg.hpp"

namespace hashbase {

/// Clustered embeddings whose within-class variance sits in a random
/// low-dimensional subspace, with a small isotropic residue on top.
struct ClusterSpec {
  std::size_t n_classes = 10;
  std::size_t per_class = 200;
  std::size_t d = 512;
  double intra_spread = 0.15;  // expected norm of the within-class noise
  double inter_scale = 1.0;    // centroid norm
  std::size_t intrinsic_dim = 40;
  std::uint64_t seed = 42;
  double residue = 1e-3;       // per-coordinate std of the isotropic residue
  /// Adds 0-2 extra random labels per item (1-3 total, uniform). Embeddings
  /// still follow the primary class.
  bool multi_label = false;
};

struct SyntheticData {
  EmbeddingMatrix embeddings;
  LabelSet labels;
  DenseMatrix centroids;  // n_classes x d
};

/// Items are class-major: class 0 first, then class 1, and so on.
///
/// x = inter_scale * unit(g_c) + intra_spread * B (g ⊙ sqrt(λ)) + residue * g'
/// where B is a random d x intrinsic_dim orthonormal basis and λ_j ∝ 0.5^j
/// sums to one.
SyntheticData generate(const ClusterSpec& spec);

struct Split {
  EmbeddingMatrix database;
  LabelSet database_labels;
  EmbeddingMatrix queries;
  LabelSet query_labels;
  std::vector<std::size_t> database_rows;  // source row of each database item
  std::vector<std::size_t> query_rows;
};

/// Stratified by (first) class: round(fraction * count) queries per class,
/// clamped to [1, count - 1]. Both outputs keep source order.
Split split(const EmbeddingMatrix& x, const LabelSet& labels, double query_fraction,
            std::uint64_t seed);

}  // namespace hashbase
