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

#include <algorithm>
#include <cmath>
#include <set>

#include "hashbase/hasher.hpp"
#include "hashbase/synth.hpp"
#include "test_util.hpp"

using namespace hashbase;
using hashbase::testing::code_of;

TEST_CASE("zero-noise items sit on their centroids") {
  ClusterSpec spec{.n_classes = 5, .per_class = 1, .d = 32, .intra_spread = 1e-300,
                   .intrinsic_dim = 4, .seed = 3, .residue = 0.0};
  const auto data = generate(spec);
  for (std::size_t c = 0; c < 5; ++c) {
    double norm = 0.0;
    for (std::size_t j = 0; j < 32; ++j) {
      CHECK(std::abs(data.embeddings.row(c)[j] - static_cast<float>(data.centroids(c, j))) <= 1e-9);
      norm += data.centroids(c, j) * data.centroids(c, j);
    }
    CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("generate is deterministic per seed") {
  ClusterSpec spec{.n_classes = 3, .per_class = 20, .d = 16, .intrinsic_dim = 5};
  const auto a = generate(spec);
  const auto b = generate(spec);
  CHECK(a.embeddings == b.embeddings);
  CHECK(a.labels == b.labels);
  spec.seed = 43;
  CHECK_FALSE(generate(spec).embeddings == a.embeddings);
}

TEST_CASE("default clusters are separable by nearest centroid") {
  const auto data = generate(ClusterSpec{});
  REQUIRE(data.embeddings.rows() == 2000);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.embeddings.rows(); ++i) {
    const auto x = data.embeddings.row(i);
    std::size_t best = 0;
    double best_dist = INFINITY;
    for (std::size_t c = 0; c < data.centroids.rows(); ++c) {
      double dist = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) dist += std::pow(x[j] - data.centroids(c, j), 2);
      if (dist < best_dist) {
        best_dist = dist;
        best = c;
      }
    }
    correct += data.labels.has(i, static_cast<std::uint32_t>(best));
  }
  CHECK(static_cast<double>(correct) / 2000.0 >= 0.99);
}

TEST_CASE("labels are balanced and class-major") {
  const auto data = generate(ClusterSpec{.n_classes = 7, .per_class = 13, .d = 24, .intrinsic_dim = 6});
  std::vector<int> count(7, 0);
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    const auto l = data.labels.labels(i);
    REQUIRE(l.size() == 1);
    CHECK(l[0] == i / 13);
    ++count[l[0]];
  }
  for (int c : count) CHECK(c == 13);
}

TEST_CASE("variance concentrates in the intrinsic dimensions") {
  // 0.2 is the widest spread the property covers.
  const auto data = generate(ClusterSpec{.intra_spread = 0.2});
  const auto pca = fit_pca(data.embeddings, 40, HashFlags{.l2_normalize = false, .mean_center = true});
  CHECK(pca.explained_variance(40) >= 0.95);
}

TEST_CASE("multi-label mode assigns one to three distinct labels") {
  const auto data = generate(ClusterSpec{.n_classes = 6, .per_class = 50, .d = 16, .intrinsic_dim = 4,
                                         .multi_label = true});
  std::set<std::size_t> sizes;
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    const auto l = data.labels.labels(i);
    CHECK(l.size() >= 1);
    CHECK(l.size() <= 3);
    CHECK(data.labels.has(i, static_cast<std::uint32_t>(i / 50)));
    sizes.insert(l.size());
  }
  CHECK(sizes.size() == 3);
}

TEST_CASE("invalid specs are rejected") {
  CHECK(code_of([] { generate(ClusterSpec{.n_classes = 0}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { generate(ClusterSpec{.d = 8, .intrinsic_dim = 9}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { generate(ClusterSpec{.intra_spread = 0.0}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("split with two items per class") {
  const auto data = generate(ClusterSpec{.n_classes = 4, .per_class = 2, .d = 8, .intrinsic_dim = 2});
  const auto s = split(data.embeddings, data.labels, 0.5, 1);
  CHECK(s.queries.rows() == 4);
  CHECK(s.database.rows() == 4);
  for (std::uint32_t c = 0; c < 4; ++c) {
    int q = 0, d = 0;
    for (std::size_t i = 0; i < s.query_labels.size(); ++i) q += s.query_labels.has(i, c);
    for (std::size_t i = 0; i < s.database_labels.size(); ++i) d += s.database_labels.has(i, c);
    CHECK(q == 1);
    CHECK(d == 1);
  }
}

TEST_CASE("split is a deterministic partition") {
  const auto data = generate(ClusterSpec{.n_classes = 5, .per_class = 31, .d = 8, .intrinsic_dim = 2});
  const auto a = split(data.embeddings, data.labels, 0.2, 9);
  const auto b = split(data.embeddings, data.labels, 0.2, 9);
  CHECK(a.query_rows == b.query_rows);
  CHECK(a.database_rows == b.database_rows);
  CHECK_FALSE(split(data.embeddings, data.labels, 0.2, 10).query_rows == a.query_rows);

  std::vector<std::size_t> all = a.query_rows;
  all.insert(all.end(), a.database_rows.begin(), a.database_rows.end());
  std::sort(all.begin(), all.end());
  CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
  CHECK(all.size() == data.embeddings.rows());
  CHECK(a.queries.rows() == 5 * 6);
  for (std::size_t i = 0; i < a.query_rows.size(); ++i) {
    const auto row = a.queries.row(i);
    const auto src = data.embeddings.row(a.query_rows[i]);
    CHECK(std::equal(row.begin(), row.end(), src.begin()));
  }
}

TEST_CASE("split rejects singleton classes and bad fractions") {
  const auto data = generate(ClusterSpec{.n_classes = 3, .per_class = 1, .d = 8, .intrinsic_dim = 2});
  CHECK(code_of([&] { split(data.embeddings, data.labels, 0.5, 0); }) == ErrorCode::kInvalidArgument);
  const auto ok = generate(ClusterSpec{.n_classes = 3, .per_class = 4, .d = 8, .intrinsic_dim = 2});
  CHECK(code_of([&] { split(ok.embeddings, ok.labels, 0.0, 0); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { split(ok.embeddings, ok.labels, 1.0, 0); }) == ErrorCode::kInvalidArgument);
}
