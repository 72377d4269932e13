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

#include "hashbase/eval.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "hashbase/error.hpp"
#include "hashbase/hasher.hpp"
#include "hashbase/parallel.hpp"

namespace hashbase {

LabelSet LabelSet::from_ids(std::size_t classes, std::span<const std::uint32_t> ids) {
  LabelSet out(classes);
  for (std::uint32_t id : ids) out.append(std::span<const std::uint32_t>(&id, 1));
  return out;
}

LabelSet LabelSet::from_sets(std::size_t classes,
                             const std::vector<std::vector<std::uint32_t>>& sets) {
  LabelSet out(classes);
  for (const auto& s : sets) out.append(s);
  return out;
}

void LabelSet::append(std::span<const std::uint32_t> labels) {
  if (labels.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "LabelSet: item " + std::to_string(n_) + " has no label");
  }
  const std::size_t offset = words_.size();
  words_.resize(offset + words_per_item_, 0);
  for (std::uint32_t cls : labels) {
    if (cls >= c_) {
      words_.resize(offset);
      throw Error(ErrorCode::kRange, "LabelSet: class id " + std::to_string(cls) +
                                         " >= class count " + std::to_string(c_));
    }
    words_[offset + cls / 64] |= std::uint64_t{1} << (cls % 64);
  }
  ++n_;
}

bool LabelSet::has(std::size_t item, std::uint32_t cls) const {
  if (cls >= c_) return false;
  return (row(item)[cls / 64] >> (cls % 64)) & 1u;
}

std::vector<std::uint32_t> LabelSet::labels(std::size_t item) const {
  std::vector<std::uint32_t> out;
  const auto r = row(item);
  for (std::size_t w = 0; w < r.size(); ++w) {
    std::uint64_t bits = r[w];
    while (bits) {
      out.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

bool LabelSet::single_label() const {
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t count = 0;
    for (std::uint64_t w : row(i)) count += std::popcount(w);
    if (count != 1) return false;
  }
  return true;
}

LabelSet LabelSet::select(std::span<const std::size_t> indices) const {
  LabelSet out(c_);
  out.words_.reserve(indices.size() * words_per_item_);
  for (std::size_t i : indices) {
    if (i >= n_) throw Error(ErrorCode::kRange, "LabelSet::select: item out of range");
    const auto r = row(i);
    out.words_.insert(out.words_.end(), r.begin(), r.end());
    ++out.n_;
  }
  return out;
}

bool relevant(std::span<const std::uint64_t> query_row, std::span<const std::uint64_t> item_row) {
  const std::size_t n = std::min(query_row.size(), item_row.size());
  for (std::size_t w = 0; w < n; ++w) {
    if (query_row[w] & item_row[w]) return true;
  }
  return false;
}

double average_precision(const std::vector<bool>& relevance, ApConvention convention,
                         std::size_t total_relevant) {
  double precision_sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < relevance.size(); ++i) {
    if (!relevance[i]) continue;
    ++hits;
    precision_sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  const std::size_t denominator = convention == ApConvention::kRetrieved
                                      ? hits
                                      : std::min(total_relevant, relevance.size());
  if (denominator == 0) return 0.0;
  return precision_sum / static_cast<double>(denominator);
}

MetricReport mean_ap(std::size_t query_count,
                     const std::function<RetrievalResult(std::size_t, std::size_t)>& rank,
                     const LabelSet& query_labels, const LabelSet& database_labels,
                     const EvalOptions& options) {
  if (query_labels.size() != query_count) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mean_ap: " + std::to_string(query_count) + " queries but " +
                    std::to_string(query_labels.size()) + " query labels");
  }
  if (query_labels.classes() != database_labels.classes()) {
    throw Error(ErrorCode::kDimensionMismatch, "mean_ap: query and database class counts differ");
  }
  const std::size_t n = database_labels.size();
  const std::size_t cutoff = options.k_eval == 0 ? n : std::min(options.k_eval, n);

  MetricReport report;
  report.k_eval = cutoff;
  report.per_query_ap.assign(query_count, 0.0);
  if (cutoff > 0) {
    parallel_for(
        query_count,
        [&](std::size_t q) {
          const RetrievalResult result = rank(q, cutoff);
          const auto qrow = query_labels.row(q);
          std::vector<bool> rel(result.size());
          for (std::size_t i = 0; i < result.size(); ++i) {
            if (result.ids[i] >= n) {
              throw Error(ErrorCode::kRange, "mean_ap: ranked id outside the database");
            }
            rel[i] = relevant(qrow, database_labels.row(result.ids[i]));
          }
          std::size_t total = 0;
          if (options.convention == ApConvention::kMinRelevantCutoff) {
            for (std::size_t i = 0; i < n; ++i) total += relevant(qrow, database_labels.row(i));
          }
          report.per_query_ap[q] = average_precision(rel, options.convention, total);
        },
        options.threads);
  }
  double sum = 0.0;
  for (double ap : report.per_query_ap) sum += ap;
  report.map = query_count == 0 ? 0.0 : sum / static_cast<double>(query_count);
  report.mean = report.map;
  report.std = 0.0;
  return report;
}

MetricReport mean_ap(const CodeDatabase& database, std::span<const BitProbabilities> queries,
                     const LabelSet& query_labels, const LabelSet& database_labels,
                     ScoreMode mode, const EvalOptions& options) {
  if (database.size() != database_labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mean_ap: " + std::to_string(database.size()) + " codes but " +
                    std::to_string(database_labels.size()) + " database labels");
  }
  if (mode == ScoreMode::kFloatCosine) {
    throw Error(ErrorCode::kInvalidArgument, "mean_ap: float mode needs real-valued vectors");
  }
  auto rank = [&](std::size_t q, std::size_t cutoff) {
    if (mode == ScoreMode::kAsymmetric) return search_asymmetric(database, queries[q], cutoff);
    return search_symmetric(database, binarize(queries[q]), cutoff);
  };
  return mean_ap(queries.size(), rank, query_labels, database_labels, options);
}

MetricReport mean_ap(const DenseMatrix& database, const DenseMatrix& queries,
                     const LabelSet& query_labels, const LabelSet& database_labels,
                     const EvalOptions& options) {
  if (database.rows() != database_labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "mean_ap: database rows and labels differ");
  }
  if (database.cols() != queries.cols() && database.rows() > 0 && queries.rows() > 0) {
    throw Error(ErrorCode::kDimensionMismatch, "mean_ap: query and database widths differ");
  }
  auto unit_rows = [](const DenseMatrix& m) {
    DenseMatrix out = m;
    for (std::size_t i = 0; i < out.rows(); ++i) {
      auto r = out.row(i);
      double norm = 0.0;
      for (double v : r) norm += v * v;
      norm = std::sqrt(norm);
      if (norm > 0.0) {
        for (double& v : r) v /= norm;
      }
    }
    return out;
  };
  const DenseMatrix db = unit_rows(database);
  const DenseMatrix qs = unit_rows(queries);
  auto rank = [&](std::size_t q, std::size_t cutoff) {
    std::vector<double> scores(db.rows());
    const auto qr = qs.row(q);
    for (std::size_t i = 0; i < db.rows(); ++i) {
      const auto r = db.row(i);
      double s = 0.0;
      for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * qr[j];
      scores[i] = s;
    }
    return top_k(scores, cutoff);
  };
  return mean_ap(queries.rows(), rank, query_labels, database_labels, options);
}

SeedSummary summarize(std::span<const double> values) {
  SeedSummary out;
  out.values.assign(values.begin(), values.end());
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(var / static_cast<double>(values.size()));
  return out;
}

SeedSummary multi_seed(const std::function<double(std::uint64_t)>& run,
                       std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "multi_seed: need at least one seed");
  std::vector<double> values;
  values.reserve(seeds.size());
  for (std::uint64_t s : seeds) values.push_back(run(s));
  return summarize(values);
}

}  // namespace hashbase
