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

#include "hashbase/protocol.hpp"

#include <algorithm>
#include <string>

#include "hashbase/error.hpp"
#include "hashbase/linalg.hpp"

namespace hashbase {

namespace {

// Runs one evaluation per seed; per-query AP is averaged over seeds and
// mean/std summarize the per-seed mAP.
template <class Run>
MetricReport over_seeds(std::span<const std::uint64_t> seeds, Run&& run) {
  std::vector<double> per_seed;
  MetricReport report;
  for (std::uint64_t seed : seeds) {
    const MetricReport one = run(seed);
    per_seed.push_back(one.map);
    report.k_eval = one.k_eval;
    if (report.per_query_ap.empty()) report.per_query_ap.assign(one.per_query_ap.size(), 0.0);
    for (std::size_t q = 0; q < report.per_query_ap.size(); ++q) {
      report.per_query_ap[q] += one.per_query_ap[q];
    }
  }
  for (double& ap : report.per_query_ap) ap /= static_cast<double>(seeds.size());
  const SeedSummary summary = summarize(per_seed);
  report.seeds.assign(seeds.begin(), seeds.end());
  report.seed_maps = summary.values;
  report.map = summary.mean;
  report.mean = summary.mean;
  report.std = summary.std;
  return report;
}

}  // namespace

MetricReport evaluate_model(const HashModel& model, const EvalData& data, ScoreMode mode,
                            const EvalOptions& options) {
  if (mode == ScoreMode::kFloatCosine) {
    const DenseMatrix db = reduce_batch(model, data.database);
    const DenseMatrix qs = reduce_batch(model, data.queries);
    return mean_ap(db, qs, data.query_labels, data.database_labels, options);
  }
  const CodeDatabase codes = encode_batch(model, data.database);
  const std::vector<BitProbabilities> queries = project_batch(model, data.queries);
  return mean_ap(codes, queries, data.query_labels, data.database_labels, mode, options);
}

MetricReport evaluate_seeds(const HashModel& model, const EvalData& data, ScoreMode mode,
                            std::span<const std::uint64_t> seeds, const EvalOptions& options) {
  if (seeds.empty() || mode == ScoreMode::kFloatCosine) {
    MetricReport report = evaluate_model(model, data, mode, options);
    report.seeds.assign(seeds.begin(), seeds.end());
    return report;
  }
  return over_seeds(seeds, [&](std::uint64_t seed) {
    return evaluate_model(model.with_seed(seed), data, mode, options);
  });
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kFull: return "full";
    case Variant::kNoRotation: return "no-rotation";
    case Variant::kNoPca: return "no-pca";
    case Variant::kGlobalPca: return "global-pca";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : {Variant::kFull, Variant::kNoRotation, Variant::kNoPca, Variant::kGlobalPca}) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

HashModel variant_model(Variant variant, const PcaBasis& pca, std::size_t k, std::uint64_t seed) {
  switch (variant) {
    case Variant::kFull:
    case Variant::kGlobalPca:
      return model_from_pca(pca, k, seed);
    case Variant::kNoRotation: {
      const HashModel m = model_from_pca(pca, k, seed);
      return m.with_rotation(DenseMatrix::identity(k), seed);
    }
    case Variant::kNoPca: {
      const std::size_t d = pca.components.rows();
      if (k < 1 || k > d) {
        throw Error(ErrorCode::kRange, "no-pca: k must be in [1, d]");
      }
      return HashModel::from_parts(pca.mean, orthonormal_columns(gaussian_matrix(d, k, seed)),
                                   DenseMatrix::identity(k), seed, pca.flags);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown variant");
}

std::vector<AblationRow> run_ablation(const EmbeddingMatrix& train, const EvalData& data,
                                      const EmbeddingMatrix* global_train,
                                      const AblationConfig& config) {
  if (config.bits.empty()) throw Error(ErrorCode::kInvalidArgument, "ablate: no bit lengths");
  if (config.seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "ablate: no seeds");
  const std::size_t max_bits = *std::max_element(config.bits.begin(), config.bits.end());
  const bool wants_global = std::find(config.variants.begin(), config.variants.end(),
                                      Variant::kGlobalPca) != config.variants.end();
  if (wants_global && global_train == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "ablate: global-pca needs a global training corpus");
  }
  const PcaBasis local = fit_pca(train, max_bits, config.flags);
  std::optional<PcaBasis> global;
  if (wants_global) global = fit_pca(*global_train, max_bits, config.flags);

  std::vector<AblationRow> rows;
  for (Variant variant : config.variants) {
    const PcaBasis& pca = variant == Variant::kGlobalPca ? *global : local;
    for (std::size_t k : config.bits) {
      AblationRow row{variant, k, {}};
      if (variant == Variant::kNoRotation) {
        // No randomness left: one run stands for every seed.
        row.report = evaluate_model(variant_model(variant, pca, k, config.seeds.front()), data,
                                    config.mode, config.eval);
        row.report.seeds = config.seeds;
        row.report.seed_maps.assign(config.seeds.size(), row.report.map);
      } else {
        row.report = over_seeds(config.seeds, [&](std::uint64_t seed) {
          return evaluate_model(variant_model(variant, pca, k, seed), data, config.mode,
                                config.eval);
        });
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace hashbase
