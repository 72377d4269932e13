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

#include "hashbase/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "hashbase/error.hpp"

namespace hashbase {

namespace {

// Decorrelates the sub-streams drawn from one user seed.
constexpr std::uint64_t kBasisStream = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kItemStream = 0xc2b2ae3d27d4eb4fULL;

void validate(const ClusterSpec& spec) {
  if (spec.n_classes < 1 || spec.per_class < 1 || spec.d < 1 || spec.intrinsic_dim < 1) {
    throw Error(ErrorCode::kInvalidArgument, "ClusterSpec: counts must be >= 1");
  }
  if (spec.intrinsic_dim > spec.d) {
    throw Error(ErrorCode::kInvalidArgument, "ClusterSpec: intrinsic_dim exceeds d");
  }
  if (!(spec.intra_spread > 0.0) || !(spec.inter_scale > 0.0) || !(spec.residue >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "ClusterSpec: intra_spread and inter_scale must be > 0, residue >= 0");
  }
  if (spec.n_classes > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "ClusterSpec: too many classes");
  }
}

}  // namespace

SyntheticData generate(const ClusterSpec& spec) {
  validate(spec);
  const std::size_t d = spec.d;
  const std::size_t m = spec.intrinsic_dim;
  const DenseMatrix basis = orthonormal_columns(gaussian_matrix(d, m, spec.seed ^ kBasisStream));

  std::vector<double> scale(m);
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    scale[j] = std::pow(0.5, static_cast<double>(j));
    total += scale[j];
  }
  for (double& s : scale) s = std::sqrt(s / total);

  std::mt19937_64 engine(spec.seed ^ kItemStream);
  std::normal_distribution<double> normal(0.0, 1.0);

  DenseMatrix centroids(spec.n_classes, d);
  for (std::size_t c = 0; c < spec.n_classes; ++c) {
    auto row = centroids.row(c);
    double norm = 0.0;
    for (double& v : row) {
      v = normal(engine);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (double& v : row) v *= spec.inter_scale / norm;
  }

  const std::size_t n = spec.n_classes * spec.per_class;
  std::vector<float> values(n * d);
  std::vector<double> item(d);
  std::vector<double> coeff(m);
  LabelSet labels(spec.n_classes);
  std::uniform_int_distribution<std::uint32_t> extra_count(0, 2);
  std::uniform_int_distribution<std::uint32_t> any_class(
      0, static_cast<std::uint32_t>(spec.n_classes - 1));
  for (std::size_t c = 0; c < spec.n_classes; ++c) {
    for (std::size_t r = 0; r < spec.per_class; ++r) {
      const auto centroid = centroids.row(c);
      std::copy(centroid.begin(), centroid.end(), item.begin());
      for (std::size_t j = 0; j < m; ++j) coeff[j] = spec.intra_spread * scale[j] * normal(engine);
      for (std::size_t i = 0; i < d; ++i) {
        const auto brow = basis.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += brow[j] * coeff[j];
        item[i] += s;
      }
      if (spec.residue > 0.0) {
        for (double& v : item) v += spec.residue * normal(engine);
      }
      const std::size_t row = c * spec.per_class + r;
      std::transform(item.begin(), item.end(), values.begin() + row * d,
                     [](double v) { return static_cast<float>(v); });

      std::vector<std::uint32_t> set{static_cast<std::uint32_t>(c)};
      if (spec.multi_label) {
        const std::size_t want = std::min<std::size_t>(1 + extra_count(engine), spec.n_classes);
        while (set.size() < want) {
          const std::uint32_t cls = any_class(engine);
          if (std::find(set.begin(), set.end(), cls) == set.end()) set.push_back(cls);
        }
      }
      labels.append(set);
    }
  }
  return {EmbeddingMatrix(n, d, std::move(values)), std::move(labels), std::move(centroids)};
}

Split split(const EmbeddingMatrix& x, const LabelSet& labels, double query_fraction,
            std::uint64_t seed) {
  if (!(query_fraction > 0.0 && query_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "split: query_fraction must be in (0, 1)");
  }
  if (x.rows() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "split: embeddings and labels differ in length");
  }
  std::vector<std::vector<std::size_t>> by_class(labels.classes());
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels.labels(i).front()].push_back(i);

  std::mt19937_64 engine(seed);
  std::vector<bool> is_query(labels.size(), false);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& members = by_class[c];
    if (members.empty()) continue;
    if (members.size() < 2) {
      throw Error(ErrorCode::kInvalidArgument,
                  "split: class " + std::to_string(c) + " has fewer than 2 items");
    }
    std::shuffle(members.begin(), members.end(), engine);
    const double want = std::round(query_fraction * static_cast<double>(members.size()));
    const std::size_t take =
        std::clamp<std::size_t>(static_cast<std::size_t>(want), 1, members.size() - 1);
    for (std::size_t i = 0; i < take; ++i) is_query[members[i]] = true;
  }

  Split out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (is_query[i] ? out.query_rows : out.database_rows).push_back(i);
  }
  out.database = x.select(out.database_rows);
  out.queries = x.select(out.query_rows);
  out.database_labels = labels.select(out.database_rows);
  out.query_labels = labels.select(out.query_rows);
  return out;
}

}  // namespace hashbase
