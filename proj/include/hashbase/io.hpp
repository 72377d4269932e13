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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "hashbase/embedding.hpp"
#include "hashbase/eval.hpp"
#include "hashbase/hasher.hpp"
#include "hashbase/index.hpp"

// Binary file formats. Every integer is little-endian, every real IEEE-754
// binary32 little-endian. Each format starts with a 24-byte header:
//
//   HBEM  magic | u32 version=1 | u64 n | u32 d | u8 dtype=0 | 3 zero bytes
//         payload: n*d f32, row-major
//   HBLB  magic | u32 version=1 | u64 n | u32 c | u8 encoding | 3 zero bytes
//         encoding 0: n rows of ⌈c/8⌉ multi-hot bytes, LSB first
//         encoding 1: n u32 class ids
//   HBMD  magic | u32 version=1 | u32 d | u32 k | u8 flags | 7 zero bytes
//         payload: u64 seed | d f32 mean | d*k f32 V | k*k f32 R (row-major)
//         flags: bit0 l2_normalize, bit1 mean_center
//   HBCD  magic | u32 version=1 | u64 n | u32 k | 4 zero bytes
//         payload: n*⌈k/64⌉ u64 words, bit j in word j/64 at position j%64
//
// Decoders validate the header before touching the payload and report every
// failure as a hashbase::Error. Writers go through a temp file + rename.

namespace hashbase {

inline constexpr std::size_t kHeaderBytes = 24;

std::vector<std::uint8_t> encode_hbem(const EmbeddingMatrix& x);
EmbeddingMatrix decode_hbem(std::span<const std::uint8_t> bytes);

/// `encoding` defaults to 1 (class ids) for single-label sets, else 0.
std::vector<std::uint8_t> encode_hblb(const LabelSet& labels,
                                      std::optional<std::uint8_t> encoding = std::nullopt);
LabelSet decode_hblb(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_hbmd(const HashModel& model);
HashModel decode_hbmd(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_hbcd(const CodeDatabase& codes);
CodeDatabase decode_hbcd(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
/// Writes `bytes` to a sibling temp file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

EmbeddingMatrix read_hbem(const std::filesystem::path& path);
void write_hbem(const EmbeddingMatrix& x, const std::filesystem::path& path);
LabelSet read_hblb(const std::filesystem::path& path);
void write_hblb(const LabelSet& labels, const std::filesystem::path& path,
                std::optional<std::uint8_t> encoding = std::nullopt);
HashModel read_hbmd(const std::filesystem::path& path);
void write_hbmd(const HashModel& model, const std::filesystem::path& path);
CodeDatabase read_hbcd(const std::filesystem::path& path);
void write_hbcd(const CodeDatabase& codes, const std::filesystem::path& path);

}  // namespace hashbase
