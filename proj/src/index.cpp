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

#include "hashbase/index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "hashbase/error.hpp"

namespace hashbase {

namespace {

std::uint64_t padding_mask(std::size_t k) {
  const std::size_t used = k & 63;
  return used == 0 ? 0 : ~((std::uint64_t{1} << used) - 1);
}

void check_padding(std::size_t k, std::span<const std::uint64_t> words, const char* what) {
  if (words.empty()) return;
  if (words.back() & padding_mask(k)) {
    throw Error(ErrorCode::kIntegrity, std::string(what) + ": padding bit set beyond k=" +
                                           std::to_string(k));
  }
}

void check_probabilities(const BitProbabilities& p) {
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double v = p.values[j];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kRange,
                  "bit probability " + std::to_string(j) + " outside [0, 1]");
    }
  }
}

}  // namespace

BinaryCode::BinaryCode(std::size_t k, std::vector<std::uint64_t> words)
    : k_(k), words_(std::move(words)) {
  if (words_.size() != words_for_bits(k_)) {
    throw Error(ErrorCode::kDimensionMismatch, "BinaryCode: word count does not match k");
  }
  check_padding(k_, words_, "BinaryCode");
}

void BinaryCode::set(std::size_t j, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << (j & 63);
  if (value) {
    words_[j >> 6] |= bit;
  } else {
    words_[j >> 6] &= ~bit;
  }
}

CodeDatabase::CodeDatabase(std::size_t n, std::size_t k, std::vector<std::uint64_t> words)
    : n_(n), k_(k), words_per_code_(words_for_bits(k)), words_(std::move(words)) {
  if (words_.size() != n_ * words_per_code_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "CodeDatabase: expected " + std::to_string(n_ * words_per_code_) +
                    " words, got " + std::to_string(words_.size()));
  }
  for (std::size_t i = 0; i < n_; ++i) check_padding(k_, code_words(i), "CodeDatabase");
}

void CodeDatabase::append(const BinaryCode& code) {
  if (code.size() != k_) {
    throw Error(ErrorCode::kDimensionMismatch, "CodeDatabase::append: code length " +
                                                   std::to_string(code.size()) + " != k " +
                                                   std::to_string(k_));
  }
  words_.insert(words_.end(), code.words().begin(), code.words().end());
  ++n_;
}

BinaryCode CodeDatabase::code(std::size_t i) const {
  const auto w = code_words(i);
  return BinaryCode(k_, std::vector<std::uint64_t>(w.begin(), w.end()));
}

std::uint32_t hamming_words(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "hamming: word counts differ");
  }
  std::uint32_t dist = 0;
  for (std::size_t i = 0; i < a.size(); ++i) dist += std::popcount(a[i] ^ b[i]);
  return dist;
}

std::uint32_t hamming(const BinaryCode& a, const BinaryCode& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "hamming: code lengths " +
                                                   std::to_string(a.size()) + " and " +
                                                   std::to_string(b.size()) + " differ");
  }
  return hamming_words(a.words(), b.words());
}

double asym_score(const BitProbabilities& p, const BinaryCode& b) {
  if (p.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "asym_score: lengths differ");
  }
  check_probabilities(p);
  double sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    sum += std::abs((b.test(j) ? 1.0 : 0.0) - p.values[j]);
  }
  return -sum;
}

AsymmetricScorer::AsymmetricScorer(const BitProbabilities& p) : k_(p.size()) {
  check_probabilities(p);
  const std::size_t bytes = (k_ + 7) / 8;
  tables_.assign(bytes * 256, 0.0);
  for (std::size_t j = 0; j < k_; ++j) base_ += p.values[j];
  for (std::size_t m = 0; m < bytes; ++m) {
    double* table = tables_.data() + m * 256;
    double weight[8] = {};
    for (std::size_t bit = 0; bit < 8 && 8 * m + bit < k_; ++bit) {
      weight[bit] = 1.0 - 2.0 * p.values[8 * m + bit];
    }
    for (unsigned v = 1; v < 256; ++v) {
      table[v] = table[v & (v - 1)] + weight[std::countr_zero(v)];
    }
  }
}

double AsymmetricScorer::score(std::span<const std::uint64_t> code_words) const {
  const std::size_t bytes = (k_ + 7) / 8;
  double acc = base_;
  for (std::size_t m = 0; m < bytes; ++m) {
    const unsigned byte = (code_words[m >> 3] >> (8 * (m & 7))) & 0xffu;
    acc += tables_[m * 256 + byte];
  }
  return -acc;
}

RetrievalResult top_k(std::span<const double> scores, std::size_t topk) {
  const std::size_t n = scores.size();
  const std::size_t keep = std::min(topk, n);
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  auto better = [&](std::uint32_t a, std::uint32_t b) {
    return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
  };
  if (keep < n) {
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                      order.end(), better);
    order.resize(keep);
  } else {
    std::sort(order.begin(), order.end(), better);
  }
  RetrievalResult result;
  result.scores.reserve(keep);
  for (std::uint32_t id : order) result.scores.push_back(scores[id]);
  result.ids = std::move(order);
  return result;
}

RetrievalResult search_asymmetric(const CodeDatabase& db, const BitProbabilities& p,
                                  std::size_t topk) {
  if (p.size() != db.bits()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "search_asymmetric: query has " + std::to_string(p.size()) +
                    " bits, database has " + std::to_string(db.bits()));
  }
  if (topk < 1) throw Error(ErrorCode::kInvalidArgument, "search_asymmetric: topk must be >= 1");
  const AsymmetricScorer scorer(p);
  std::vector<double> scores(db.size());
  for (std::size_t i = 0; i < db.size(); ++i) scores[i] = scorer.score(db.code_words(i));
  return top_k(scores, topk);
}

RetrievalResult search_symmetric(const CodeDatabase& db, const BinaryCode& q, std::size_t topk) {
  if (q.size() != db.bits()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "search_symmetric: query has " + std::to_string(q.size()) +
                    " bits, database has " + std::to_string(db.bits()));
  }
  if (topk < 1) throw Error(ErrorCode::kInvalidArgument, "search_symmetric: topk must be >= 1");
  std::vector<double> scores(db.size());
  for (std::size_t i = 0; i < db.size(); ++i) {
    scores[i] = -static_cast<double>(hamming_words(q.words(), db.code_words(i)));
  }
  return top_k(scores, topk);
}

}  // namespace hashbase
