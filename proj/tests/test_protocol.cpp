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

#include <doctest.h>

#include "hashbase/protocol.hpp"
#include "hashbase/synth.hpp"
#include "test_util.hpp"

using namespace hashbase;
using hashbase::testing::code_of;

namespace {

struct Fixture {
  SyntheticData data = generate(ClusterSpec{.n_classes = 4, .per_class = 40, .d = 32, .intra_spread = 0.6,
                                            .intrinsic_dim = 8, .seed = 5, .residue = 0.05});
  Split parts = split(data.embeddings, data.labels, 0.25, 1);
  EvalData eval() const {
    return {parts.database, parts.database_labels, parts.queries, parts.query_labels};
  }
};

}  // namespace

TEST_CASE("evaluate_seeds refits only the rotation") {
  Fixture f;
  const auto model = fit(f.parts.database, 8, 0);
  const std::vector<std::uint64_t> seeds{3, 4, 5};
  const auto r = evaluate_seeds(model, f.eval(), ScoreMode::kAsymmetric, seeds, EvalOptions{});
  REQUIRE(r.seed_maps.size() == 3);
  std::vector<double> expected;
  for (auto s : seeds) {
    const auto one = evaluate_model(model.with_seed(s), f.eval(), ScoreMode::kAsymmetric, EvalOptions{});
    expected.push_back(one.map);
  }
  CHECK(r.seed_maps == expected);
  const auto summary = summarize(expected);
  CHECK(r.mean == summary.mean);
  CHECK(r.std == summary.std);
  CHECK(r.seeds == seeds);
  double mean_ap = 0.0;
  for (double ap : r.per_query_ap) mean_ap += ap / r.per_query_ap.size();
  CHECK(mean_ap == doctest::Approx(r.map).epsilon(1e-12));
}

TEST_CASE("float mode ignores seeds") {
  Fixture f;
  const auto model = fit(f.parts.database, 8, 0);
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  const auto r = evaluate_seeds(model, f.eval(), ScoreMode::kFloatCosine, seeds, EvalOptions{});
  CHECK(r.std == 0.0);
  CHECK(r.map == evaluate_model(model.with_seed(99), f.eval(), ScoreMode::kFloatCosine, EvalOptions{}).map);
}

TEST_CASE("variant models") {
  Fixture f;
  const auto pca = fit_pca(f.parts.database, 16);
  const auto full = variant_model(Variant::kFull, pca, 8, 2);
  CHECK(full == model_from_pca(pca, 8, 2));
  const auto flat = variant_model(Variant::kNoRotation, pca, 8, 2);
  CHECK(flat.basis() == full.basis());
  CHECK(flat.rotation() == DenseMatrix::identity(8));
  const auto raw = variant_model(Variant::kNoPca, pca, 8, 2);
  CHECK(raw.mean() == pca.mean);
  CHECK(raw.rotation() == DenseMatrix::identity(8));
  CHECK(orthonormality_error(raw.basis()) <= 1e-12);
  CHECK_FALSE(raw.basis() == full.basis());
  CHECK_FALSE(raw.basis() == variant_model(Variant::kNoPca, pca, 8, 3).basis());
  CHECK(code_of([&] { variant_model(Variant::kNoPca, pca, 33, 2); }) == ErrorCode::kRange);
}

TEST_CASE("variant names round-trip") {
  for (Variant v : {Variant::kFull, Variant::kNoRotation, Variant::kNoPca, Variant::kGlobalPca})
    CHECK(parse_variant(to_string(v)) == v);
  CHECK_FALSE(parse_variant("pca").has_value());
}

TEST_CASE("ablation table shape and determinism") {
  Fixture f;
  const auto other = generate(ClusterSpec{.n_classes = 3, .per_class = 30, .d = 32, .intrinsic_dim = 8, .seed = 77});
  AblationConfig config;
  config.variants = {Variant::kFull, Variant::kNoRotation, Variant::kNoPca, Variant::kGlobalPca};
  config.bits = {4, 8};
  config.seeds = {0, 1, 2};
  const auto rows = run_ablation(f.parts.database, f.eval(), &other.embeddings, config);
  REQUIRE(rows.size() == 8);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].variant == config.variants[i / 2]);
    CHECK(rows[i].bits == config.bits[i % 2]);
    CHECK(rows[i].report.seeds == config.seeds);
    CHECK(rows[i].report.seed_maps.size() == 3);
    CHECK(rows[i].report.map >= 0.0);
    CHECK(rows[i].report.map <= 1.0);
  }
  CHECK(rows[2].report.std == 0.0);
  CHECK(rows[3].report.std == 0.0);

  const auto again = run_ablation(f.parts.database, f.eval(), &other.embeddings, config);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(again[i].report.seed_maps == rows[i].report.seed_maps);

  config.variants = {Variant::kGlobalPca};
  CHECK(code_of([&] { run_ablation(f.parts.database, f.eval(), nullptr, config); }) ==
        ErrorCode::kInvalidArgument);
}
