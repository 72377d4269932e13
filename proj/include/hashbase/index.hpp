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
#include <span>
#include <vector>

namespace hashbase {

/// Per-item bit probabilities p in [0, 1]^k.
struct BitProbabilities {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  bool operator==(const BitProbabilities&) const = default;
};

inline std::size_t words_for_bits(std::size_t k) { return (k + 63) / 64; }

/// k-bit code packed into 64-bit words, LSB first: bit j lives in bit
/// (j mod 64) of word j / 64. Padding bits past k are always zero.
class BinaryCode {
 public:
  BinaryCode() = default;
  explicit BinaryCode(std::size_t k) : k_(k), words_(words_for_bits(k), 0) {}
  /// Throws kIntegrity if a padding bit is set.
  BinaryCode(std::size_t k, std::vector<std::uint64_t> words);

  std::size_t size() const noexcept { return k_; }
  bool test(std::size_t j) const { return (words_[j >> 6] >> (j & 63)) & 1u; }
  void set(std::size_t j, bool value = true);
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool operator==(const BinaryCode&) const = default;

 private:
  std::size_t k_ = 0;
  std::vector<std::uint64_t> words_;
};

/// n packed codes of k bits, ⌈k/64⌉ words each, ids implicit 0..n-1.
class CodeDatabase {
 public:
  CodeDatabase() = default;
  explicit CodeDatabase(std::size_t k) : k_(k), words_per_code_(words_for_bits(k)) {}
  /// Validates word count and zero padding.
  CodeDatabase(std::size_t n, std::size_t k, std::vector<std::uint64_t> words);

  std::size_t size() const noexcept { return n_; }
  std::size_t bits() const noexcept { return k_; }
  std::size_t words_per_code() const noexcept { return words_per_code_; }
  bool empty() const noexcept { return n_ == 0; }

  void append(const BinaryCode& code);
  std::span<const std::uint64_t> code_words(std::size_t i) const {
    return {words_.data() + i * words_per_code_, words_per_code_};
  }
  BinaryCode code(std::size_t i) const;
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool operator==(const CodeDatabase&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::size_t words_per_code_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Ranked ids with non-increasing scores; ties by ascending id.
struct RetrievalResult {
  std::vector<std::uint32_t> ids;
  std::vector<double> scores;

  std::size_t size() const noexcept { return ids.size(); }
};

std::uint32_t hamming(const BinaryCode& a, const BinaryCode& b);
std::uint32_t hamming_words(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// −Σ_j |b_j − p_j| evaluated term by term.
double asym_score(const BitProbabilities& p, const BinaryCode& b);

/// Precomputed asymmetric scorer for one query.
///
/// Uses −Σ|b_j − p_j| = −(Σ_j p_j + Σ_{j: b_j = 1} (1 − 2 p_j)). The second
/// sum is split into byte-wide lookup tables (256 entries per byte of code),
/// so a k-bit score costs ⌈k/8⌉ table reads.
class AsymmetricScorer {
 public:
  explicit AsymmetricScorer(const BitProbabilities& p);

  std::size_t bits() const noexcept { return k_; }
  double score(std::span<const std::uint64_t> code_words) const;

 private:
  std::size_t k_ = 0;
  double base_ = 0.0;
  std::vector<double> tables_;  // ⌈k/8⌉ x 256
};

/// Picks the `topk` best entries of `scores` (descending, ties by id).
RetrievalResult top_k(std::span<const double> scores, std::size_t topk);

RetrievalResult search_asymmetric(const CodeDatabase& db, const BitProbabilities& p,
                                  std::size_t topk);
/// Score is −hamming.
RetrievalResult search_symmetric(const CodeDatabase& db, const BinaryCode& q, std::size_t topk);

}  // namespace hashbase
