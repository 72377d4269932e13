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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hashbase/embedding.hpp"
#include "hashbase/eval.hpp"
#include "hashbase/hasher.hpp"

namespace hashbase {

/// A database/query split with ground truth.
struct EvalData {
  const EmbeddingMatrix& database;
  const LabelSet& database_labels;
  const EmbeddingMatrix& queries;
  const LabelSet& query_labels;
};

/// Encodes the database, projects the queries and ranks them. kFloatCosine
/// ranks by cosine similarity of the PCA-reduced vectors z.
MetricReport evaluate_model(const HashModel& model, const EvalData& data, ScoreMode mode,
                            const EvalOptions& options);

/// Multi-seed protocol: V and the mean stay fixed, R is redrawn per seed.
/// The report's per-query AP is averaged over seeds, `mean`/`std` summarize
/// the per-seed mAP. Float mode has no randomness and runs once (std 0).
/// An empty seed list evaluates `model` as is.
MetricReport evaluate_seeds(const HashModel& model, const EvalData& data, ScoreMode mode,
                            std::span<const std::uint64_t> seeds, const EvalOptions& options);

enum class Variant {
  kFull,        // local PCA + random rotation
  kNoRotation,  // local PCA, R = I
  kNoPca,       // k x d row-orthonormal random projection of pre(x)
  kGlobalPca,   // PCA fitted on a separate corpus + random rotation
};

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

/// Model for one (variant, k, seed) cell. `pca` supplies mean, flags and,
/// for the PCA variants, the basis (pass the global fit for kGlobalPca).
HashModel variant_model(Variant variant, const PcaBasis& pca, std::size_t k, std::uint64_t seed);

struct AblationConfig {
  std::vector<Variant> variants{Variant::kFull, Variant::kNoRotation, Variant::kNoPca};
  std::vector<std::size_t> bits{16, 32, 64};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  HashFlags flags;
  ScoreMode mode = ScoreMode::kAsymmetric;
  EvalOptions eval;
};

struct AblationRow {
  Variant variant;
  std::size_t bits;
  MetricReport report;
};

/// One row per (variant, bits), variants outermost. kGlobalPca requires
/// `global_train`.
std::vector<AblationRow> run_ablation(const EmbeddingMatrix& train, const EvalData& data,
                                      const EmbeddingMatrix* global_train,
                                      const AblationConfig& config);

}  // namespace hashbase
