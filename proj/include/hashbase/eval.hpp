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
#include <functional>
#include <span>
#include <vector>

#include "hashbase/index.hpp"
#include "hashbase/linalg.hpp"

namespace hashbase {

/// Per-item class memberships stored as multi-hot rows of ⌈c/64⌉ words.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::size_t classes)
      : c_(classes), words_per_item_((classes + 63) / 64) {}

  /// One class id per item.
  static LabelSet from_ids(std::size_t classes, std::span<const std::uint32_t> ids);
  /// Arbitrary non-empty label sets.
  static LabelSet from_sets(std::size_t classes,
                            const std::vector<std::vector<std::uint32_t>>& sets);

  std::size_t size() const noexcept { return n_; }
  std::size_t classes() const noexcept { return c_; }

  /// Throws kRange on id >= c and kInvalidArgument on an empty set.
  void append(std::span<const std::uint32_t> labels);
  bool has(std::size_t item, std::uint32_t cls) const;
  std::vector<std::uint32_t> labels(std::size_t item) const;
  std::span<const std::uint64_t> row(std::size_t item) const {
    return {words_.data() + item * words_per_item_, words_per_item_};
  }
  bool single_label() const;

  LabelSet select(std::span<const std::size_t> indices) const;

  bool operator==(const LabelSet&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t c_ = 0;
  std::size_t words_per_item_ = 0;
  std::vector<std::uint64_t> words_;
};

/// True iff the two label sets intersect.
bool relevant(std::span<const std::uint64_t> query_row, std::span<const std::uint64_t> item_row);

/// Denominator of average precision.
enum class ApConvention {
  kRetrieved,          // relevant items found within the cutoff
  kMinRelevantCutoff,  // min(total relevant in the database, cutoff)
};

/// AP of one ranked relevance list. Returns 0 when the denominator is 0.
/// `total_relevant` is only read for kMinRelevantCutoff.
double average_precision(const std::vector<bool>& relevance,
                         ApConvention convention = ApConvention::kRetrieved,
                         std::size_t total_relevant = 0);

enum class ScoreMode { kAsymmetric, kSymmetric, kFloatCosine };

struct EvalOptions {
  std::size_t k_eval = 0;  // 0 means the whole database
  ApConvention convention = ApConvention::kRetrieved;
  std::size_t threads = 0;  // 0: HASHBASE_THREADS or hardware concurrency
};

struct MetricReport {
  double map = 0.0;
  std::vector<double> per_query_ap;
  std::size_t k_eval = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> seed_maps;  // mAP per seed, aligned with `seeds`
  double mean = 0.0;
  double std = 0.0;
};

/// Ranks each query with `rank(q, cutoff)` and averages AP over queries.
/// The cutoff passed to `rank` is min(k_eval, database size).
MetricReport mean_ap(std::size_t query_count,
                     const std::function<RetrievalResult(std::size_t, std::size_t)>& rank,
                     const LabelSet& query_labels, const LabelSet& database_labels,
                     const EvalOptions& options);

/// Binary modes: kAsymmetric scores `queries` directly, kSymmetric binarizes
/// them first.
MetricReport mean_ap(const CodeDatabase& database, std::span<const BitProbabilities> queries,
                     const LabelSet& query_labels, const LabelSet& database_labels,
                     ScoreMode mode, const EvalOptions& options);

/// Cosine similarity between real-valued rows (the float baseline).
MetricReport mean_ap(const DenseMatrix& database, const DenseMatrix& queries,
                     const LabelSet& query_labels, const LabelSet& database_labels,
                     const EvalOptions& options);

struct SeedSummary {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  std::vector<double> values;
};

SeedSummary summarize(std::span<const double> values);
SeedSummary multi_seed(const std::function<double(std::uint64_t)>& run,
                       std::span<const std::uint64_t> seeds);

}  // namespace hashbase
