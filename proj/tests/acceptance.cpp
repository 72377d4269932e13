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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Every tolerance and fixture is fixed in this file.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "format_fixtures.hpp"
#include "hashbase/error.hpp"
#include "hashbase/io.hpp"
#include "hashbase/protocol.hpp"
#include "hashbase/synth.hpp"
#include "oracles.hpp"

using namespace hashbase;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  const char* id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_gram_error(const DenseMatrix& q) {
  const auto m = oracle::to_nested(q);
  const auto g = oracle::matmul(oracle::transpose(m), m);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) worst = std::max(worst, std::abs(g[i][j] - (i == j ? 1.0 : 0.0)));
  return worst;
}

BitProbabilities degenerate(const BinaryCode& b) {
  BitProbabilities p;
  for (std::size_t j = 0; j < b.size(); ++j) p.values.push_back(b.test(j) ? 1.0 : 0.0);
  return p;
}

BinaryCode random_code(std::size_t k, std::mt19937_64& rng) {
  BinaryCode c(k);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t j = 0; j < k; ++j) c.set(j, coin(rng));
  return c;
}

// ---------------------------------------------------------------------------

Outcome p1_orthogonality() {
  double worst64 = 0.0, worst32 = 0.0;
  for (std::size_t k : {16u, 32u, 64u, 256u}) {
    const auto base = HashModel::from_parts(std::vector<double>(k, 0.0), DenseMatrix::identity(k),
                                            DenseMatrix::identity(k), 0, HashFlags{});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto model = base.with_seed(seed);
      worst64 = std::max(worst64, max_gram_error(model.rotation()));
      const auto loaded = decode_hbmd(encode_hbmd(model));
      worst32 = std::max(worst32, max_gram_error(loaded.rotation()));
    }
  }
  return {worst64 <= 1e-10 && worst32 <= 1e-5,
          fmt("max|RtR-I| = %.2e (<= 1e-10), after HBMD %.2e (<= 1e-5)", worst64, worst32)};
}

Outcome p2_svd() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> dim(2, 30);
  double worst_rel = 0.0;
  int beaten = 0, checked = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = dim(rng), d = dim(rng), r = std::min(n, d);
    const auto x = gaussian_matrix(n, d, 7000 + t);
    const auto full = truncated_svd(x, r);
    const auto ref = oracle::singular_values(x);
    for (std::size_t j = 0; j < r; ++j) worst_rel = std::max(worst_rel, std::abs(full.s[j] - ref[j]) / ref[j]);

    const std::size_t k = 1 + t % (r - 1);
    const auto v = truncated_svd(x, k).v;
    auto residual = [&](const DenseMatrix& q) {
      const auto proj = multiply(multiply(x, q), q.transpose());
      double s = 0.0;
      for (std::size_t i = 0; i < x.values().size(); ++i) s += std::pow(x.values()[i] - proj.values()[i], 2);
      return std::sqrt(s);
    };
    const double best = residual(v);
    for (std::uint64_t s = 0; s < 100; ++s) {
      ++checked;
      if (residual(orthonormal_columns(gaussian_matrix(d, k, 100000 + 100 * t + s))) < best) ++beaten;
    }
  }
  return {worst_rel <= 1e-8 && beaten == 0,
          fmt("max relative singular value error %.2e (<= 1e-8); svd beaten by %d of %d random projections",
              worst_rel, beaten, checked)};
}

Outcome p3_sign() {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> kind(0, 9);
  std::size_t zeros = 0, mismatches = 0;
  BitProbabilities p;
  std::vector<double> u(64);
  for (int t = 0; t < 100000; ++t) {
    p.values.clear();
    for (double& v : u) {
      switch (kind(rng)) {
        case 0: v = 0.0; break;
        case 1: v = -0.0; break;
        case 2: v = 1e-200 * g(rng); break;
        case 3: v = 1e3 * g(rng); break;
        default: v = g(rng);
      }
      zeros += v == 0.0;
      p.values.push_back(sigmoid(v));
    }
    const auto b = binarize(p);
    for (std::size_t j = 0; j < u.size(); ++j) mismatches += b.test(j) != (u[j] > 0.0);
  }
  return {mismatches == 0, fmt("%zu mismatches over 1e5 vectors of 64 entries (%zu exact zeros)", mismatches, zeros)};
}

Outcome p4_reduction() {
  std::mt19937_64 rng(4);
  std::size_t score_mismatch = 0, rank_mismatch = 0;
  for (int t = 0; t < 10000; ++t) {
    const auto q = random_code(64, rng), b = random_code(64, rng);
    const auto p = degenerate(q);
    const double h = -static_cast<double>(hamming(q, b));
    score_mismatch += asym_score(p, b) != h;
    score_mismatch += AsymmetricScorer(p).score(b.words()) != h;
  }
  for (std::size_t k : {8u, 64u}) {
    for (int t = 0; t < 10; ++t) {
      CodeDatabase db(k);
      for (int i = 0; i < 500; ++i) db.append(random_code(k, rng));
      const auto q = random_code(k, rng);
      const auto s = search_symmetric(db, q, db.size());
      const auto a = search_asymmetric(db, degenerate(q), db.size());
      rank_mismatch += s.ids != a.ids || s.scores != a.scores;
    }
  }
  return {score_mismatch == 0 && rank_mismatch == 0,
          fmt("%zu score mismatches over 1e4 pairs; %zu of 20 full rankings differ", score_mismatch, rank_mismatch)};
}

Outcome p5_map() {
  // Instances use dyadic probabilities and power-of-two vector scalings so
  // ties are exact for the library and the oracle alike.
  std::mt19937_64 rng(5);
  const double ap_example = average_precision({true, false, true});
  bool ok = std::abs(ap_example - 5.0 / 6.0) <= 1e-15;
  double worst = 0.0;
  int instances = 0;
  for (int t = 0; t < 25; ++t, ++instances) {
    const std::size_t n = 1 + t % 12, nq = 1 + t % 4, classes = 2 + t % 3;
    const std::size_t k = 3 + t % 5;
    const std::size_t k_eval = t % 3 == 0 ? 0 : 1 + t % n;
    const auto convention = t % 4 == 3 ? ApConvention::kMinRelevantCutoff : ApConvention::kRetrieved;
    const int mode = t % 3;  // asym, sym, float
    std::uniform_int_distribution<std::uint32_t> cls(0, static_cast<std::uint32_t>(classes - 1));
    std::uniform_int_distribution<int> eighth(0, 8);
    std::vector<std::vector<std::uint32_t>> db_sets(n), q_sets(nq);
    for (auto& s : db_sets) s = {cls(rng)};
    for (auto& s : q_sets) s = {cls(rng)};
    if (t % 5 == 4) db_sets[0].push_back((db_sets[0][0] + 1) % classes);
    const auto db_labels = LabelSet::from_sets(classes, db_sets);
    const auto q_labels = LabelSet::from_sets(classes, q_sets);
    const EvalOptions opts{.k_eval = k_eval, .convention = convention, .threads = 1};

    std::vector<std::vector<double>> scores(nq, std::vector<double>(n));
    MetricReport got;
    if (mode < 2) {
      CodeDatabase db(k);
      for (std::size_t i = 0; i < n; ++i) db.append(random_code(k, rng));
      std::vector<BitProbabilities> qs(nq);
      for (std::size_t q = 0; q < nq; ++q) {
        for (std::size_t j = 0; j < k; ++j) qs[q].values.push_back(eighth(rng) / 8.0);
        for (std::size_t i = 0; i < n; ++i) {
          double s = 0.0;
          for (std::size_t j = 0; j < k; ++j) {
            const double pj = mode == 0 ? qs[q].values[j] : (qs[q].values[j] > 0.5 ? 1.0 : 0.0);
            s += std::abs((db.code(i).test(j) ? 1.0 : 0.0) - pj);
          }
          scores[q][i] = -s;
        }
      }
      got = mean_ap(db, qs, q_labels, db_labels, mode == 0 ? ScoreMode::kAsymmetric : ScoreMode::kSymmetric, opts);
    } else {
      std::uniform_int_distribution<int> coord(-2, 2);
      std::uniform_int_distribution<int> shift(0, 3);
      auto vec = [&] {
        std::vector<double> v;
        do {
          v = {double(coord(rng)), double(coord(rng)), double(coord(rng))};
        } while (v[0] == 0 && v[1] == 0 && v[2] == 0);
        return v;
      };
      auto cosine = [](const std::vector<double>& a, const std::vector<double>& b) {
        long double dot = 0, na = 0, nb = 0;
        for (int j = 0; j < 3; ++j) {
          dot += a[j] * b[j];
          na += a[j] * a[j];
          nb += b[j] * b[j];
        }
        return static_cast<double>(dot / std::sqrt(na * nb));
      };
      auto parallel = [](const std::vector<double>& a, const std::vector<double>& b) {
        return a[1] * b[2] == a[2] * b[1] && a[2] * b[0] == a[0] * b[2] && a[0] * b[1] == a[1] * b[0] &&
               a[0] * b[0] + a[1] * b[1] + a[2] * b[2] > 0;
      };
      std::vector<std::vector<double>> qv(nq), dv;
      for (auto& v : qv) v = vec();
      // Distinct directions must not tie in cosine with any query; exact
      // ties come only from power-of-two rescaled copies.
      while (dv.size() < n) {
        auto v = vec();
        bool clash = false;
        for (const auto& u : dv) {
          if (parallel(u, v)) continue;
          for (const auto& q : qv) clash = clash || std::abs(cosine(q, u) - cosine(q, v)) < 1e-9;
        }
        if (clash) continue;
        const double scale = std::ldexp(1.0, shift(rng));
        for (double& t : v) t *= scale;
        dv.push_back(v);
      }
      DenseMatrix db(n, 3), qm(nq, 3);
      for (std::size_t i = 0; i < n; ++i)
        for (int j = 0; j < 3; ++j) db(i, j) = dv[i][j];
      for (std::size_t q = 0; q < nq; ++q) {
        for (int j = 0; j < 3; ++j) qm(q, j) = qv[q][j];
        for (std::size_t i = 0; i < n; ++i) scores[q][i] = cosine(qv[q], dv[i]);
      }
      got = mean_ap(db, qm, q_labels, db_labels, opts);
    }

    const std::size_t cutoff = k_eval == 0 ? n : std::min(k_eval, n);
    double map = 0.0;
    for (std::size_t q = 0; q < nq; ++q) {
      const auto order = oracle::rank_by_sort(scores[q], cutoff);
      std::vector<bool> rel;
      std::size_t total = 0;
      for (std::size_t i = 0; i < n; ++i) total += relevant(q_labels.row(q), db_labels.row(i));
      for (auto id : order) rel.push_back(relevant(q_labels.row(q), db_labels.row(id)));
      auto ap = oracle::average_precision(rel);
      double expected = ap.value();
      if (convention == ApConvention::kMinRelevantCutoff) {
        std::size_t hits = std::count(rel.begin(), rel.end(), true);
        const std::size_t denom = std::min(total, cutoff);
        expected = denom == 0 ? 0.0 : expected * static_cast<double>(hits) / static_cast<double>(denom);
      }
      worst = std::max(worst, std::abs(got.per_query_ap[q] - expected));
      map += expected / static_cast<double>(nq);
    }
    worst = std::max(worst, std::abs(got.map - map));
  }
  ok = ok && worst <= 1e-12;
  return {ok, fmt("AP(T,F,T) = %.15f; max |mAP - oracle| over %d instances = %.1e (<= 1e-12)", ap_example,
                  instances, worst)};
}

struct Benchmark {
  SyntheticData data;
  Split parts;
  EvalData eval() const { return {parts.database, parts.database_labels, parts.queries, parts.query_labels}; }
};

Benchmark make_benchmark(const ClusterSpec& spec, double query_fraction, std::uint64_t split_seed) {
  Benchmark b{generate(spec), {}};
  b.parts = split(b.data.embeddings, b.data.labels, query_fraction, split_seed);
  return b;
}

const std::vector<std::uint64_t> kSeeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};

// 10 classes x 250 items, d = 512: database 2000, queries 500.
const ClusterSpec kBenchmarkSpec{.n_classes = 10, .per_class = 250, .d = 512, .intra_spread = 0.15,
                                 .inter_scale = 1.0, .intrinsic_dim = 40, .seed = 42};

Outcome p6_benchmark() {
  const auto b = make_benchmark(kBenchmarkSpec, 0.2, 0);
  const EvalOptions opts{};
  const auto pca = fit_pca(b.parts.database, 64);
  const double float_map = evaluate_model(model_from_pca(pca, 64, 0), b.eval(), ScoreMode::kFloatCosine, opts).map;
  double m[3];
  const std::size_t bits[3] = {16, 32, 64};
  for (int i = 0; i < 3; ++i)
    m[i] = evaluate_seeds(model_from_pca(pca, bits[i], 0), b.eval(), ScoreMode::kAsymmetric, kSeeds, opts).mean;
  const bool ok = b.parts.database.rows() == 2000 && b.parts.queries.rows() == 500 && float_map >= 0.95 &&
                  std::abs(m[2] - float_map) <= 0.05 && m[2] >= m[1] && m[1] >= m[0] - 0.02;
  return {ok, fmt("db %zu / queries %zu; float mAP %.4f (>= 0.95); asym mAP 16/32/64 = %.4f/%.4f/%.4f "
                  "(|64 - float| <= 0.05, 64 >= 32 >= 16 - 0.02)",
                  b.parts.database.rows(), b.parts.queries.rows(), float_map, m[0], m[1], m[2])};
}

Outcome p7_ablation() {
  // Anisotropic data with a heavy isotropic tail, so a projection that
  // ignores the principal subspace loses most of the class signal.
  const ClusterSpec spec{.n_classes = 6, .per_class = 400, .d = 512, .intra_spread = 0.4, .inter_scale = 1.0,
                         .intrinsic_dim = 40, .seed = 42, .residue = 0.03};
  const auto b = make_benchmark(spec, 0.2, 0);
  AblationConfig config;
  config.bits = {16};
  config.seeds = kSeeds;
  const auto rows = run_ablation(b.parts.database, b.eval(), nullptr, config);
  double full = 0, flat = 0, raw = 0;
  for (const auto& r : rows) {
    if (r.variant == Variant::kFull) full = r.report.mean;
    if (r.variant == Variant::kNoRotation) flat = r.report.mean;
    if (r.variant == Variant::kNoPca) raw = r.report.mean;
  }
  return {full - raw >= 0.05 && full >= flat,
          fmt("16 bits: full %.4f, no-pca %.4f (gap %.4f >= 0.05), no-rotation %.4f (<= full)", full, raw,
              full - raw, flat)};
}

Outcome p8_asymmetric() {
  const auto b = make_benchmark(kBenchmarkSpec, 0.2, 0);
  const auto model = fit(b.parts.database, 16, 0);
  const auto asym = evaluate_seeds(model, b.eval(), ScoreMode::kAsymmetric, kSeeds, EvalOptions{});
  const auto sym = evaluate_seeds(model, b.eval(), ScoreMode::kSymmetric, kSeeds, EvalOptions{});
  return {asym.mean >= sym.mean,
          fmt("16 bits: asym %.6f±%.6f >= sym %.6f±%.6f", asym.mean, asym.std, sym.mean, sym.std)};
}

Outcome p9_angle() {
  const std::size_t d = 256;
  const auto model = HashModel::from_parts(std::vector<double>(d, 0.0), DenseMatrix::identity(d),
                                           DenseMatrix::identity(d), 0, HashFlags{false, false})
                         .with_seed(9);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  auto unit = [&](std::vector<double> v) {
    double s = 0.0;
    for (double t : v) s += t * t;
    for (double& t : v) t /= std::sqrt(s);
    return v;
  };
  bool ok = true;
  std::string detail;
  for (double deg : {30.0, 60.0, 90.0}) {
    const double theta = deg * std::numbers::pi / 180.0;
    std::vector<double> frac;
    for (int t = 0; t < 2000; ++t) {
      std::vector<double> x(d), w(d);
      for (double& v : x) v = g(rng);
      for (double& v : w) v = g(rng);
      x = unit(x);
      double dot = 0.0;
      for (std::size_t j = 0; j < d; ++j) dot += x[j] * w[j];
      for (std::size_t j = 0; j < d; ++j) w[j] -= dot * x[j];
      w = unit(w);
      std::vector<double> y(d);
      for (std::size_t j = 0; j < d; ++j) y[j] = std::cos(theta) * x[j] + std::sin(theta) * w[j];
      const auto bx = binarize(project(model, x));
      const auto by = binarize(project(model, y));
      frac.push_back(static_cast<double>(hamming(bx, by)) / static_cast<double>(d));
    }
    const auto s = summarize(frac);
    const double stderr_ = s.std * std::sqrt(2000.0 / 1999.0) / std::sqrt(2000.0);
    const double dev = std::abs(s.mean - theta / std::numbers::pi);
    ok = ok && dev <= 3.0 * stderr_;
    detail += fmt("%s%.0f deg: %.5f vs %.5f (|dev| %.5f <= %.5f)", detail.empty() ? "" : "; ", deg, s.mean,
                  theta / std::numbers::pi, dev, 3.0 * stderr_);
  }
  return {ok, detail};
}

Outcome p10_fuzz() {
  std::size_t mutations = 0, accepted = 0, unstructured = 0, unstable = 0;
  for (const auto& fc : fixtures::header_fuzz_cases()) {
    std::vector<std::uint8_t> again;
    if (fc.name == "HBEM") again = encode_hbem(decode_hbem(fc.bytes));
    if (fc.name == "HBLB") again = encode_hblb(decode_hblb(fc.bytes), fc.bytes[20]);
    if (fc.name == "HBMD") again = encode_hbmd(decode_hbmd(fc.bytes));
    if (fc.name == "HBCD") again = encode_hbcd(decode_hbcd(fc.bytes));
    unstable += again != fc.bytes;
    for (std::size_t pos = 0; pos < kHeaderBytes; ++pos) {
      for (int delta = 1; delta < 256; ++delta) {
        auto mutated = fc.bytes;
        mutated[pos] = static_cast<std::uint8_t>(mutated[pos] + delta);
        ++mutations;
        try {
          fc.decode(mutated);
          ++accepted;
        } catch (const Error&) {
        } catch (...) {
          ++unstructured;
        }
      }
    }
  }
  return {accepted == 0 && unstructured == 0 && unstable == 0,
          fmt("%zu header mutations: %zu accepted, %zu unstructured errors; %zu of 4 round-trips not byte-stable",
              mutations, accepted, unstructured, unstable)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"P1", "orthogonality", 5, p1_orthogonality},
      {"P2", "svd oracle", 30, p2_svd},
      {"P3", "sign equivalence", 5, p3_sign},
      {"P4", "asymmetric reduction", 10, p4_reduction},
      {"P5", "mAP oracle", 5, p5_map},
      {"P6", "synthetic benchmark", 120, p6_benchmark},
      {"P7", "ablation ordering", 120, p7_ablation},
      {"P8", "asymmetric >= symmetric", 60, p8_asymmetric},
      {"P9", "angle link", 30, p9_angle},
      {"P10", "format fuzz", 30, p10_fuzz},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = out.pass && secs < c.budget_seconds;
    failures += !pass;
    std::printf("%-4s %s  %s: %s [%.2f s, limit %.0f s]\n", c.id, pass ? "PASS" : "FAIL", c.title,
                out.detail.c_str(), secs, c.budget_seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
