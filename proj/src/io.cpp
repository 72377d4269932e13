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

#include "hashbase/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <string_view>

#include "hashbase/error.hpp"

namespace hashbase {

namespace {

constexpr std::uint32_t kVersion = 1;

class ByteWriter {
 public:
  void magic(std::string_view m) { buf_.insert(buf_.end(), m.begin(), m.end()); }
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(double v) { u32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
  void zeros(std::size_t count) { buf_.insert(buf_.end(), count, 0); }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() { return bytes_[pos_++]; }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[pos_++]} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{bytes_[pos_++]} << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  bool zeros(std::size_t count) {
    bool ok = true;
    for (std::size_t i = 0; i < count; ++i) ok = ok && bytes_[pos_++] == 0;
    return ok;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

// Shared header checks: minimum length, magic, version.
ByteReader open_header(std::span<const std::uint8_t> bytes, std::string_view magic) {
  if (bytes.size() < kHeaderBytes) {
    throw Error(ErrorCode::kTruncated, std::string(magic) + ": header needs " +
                                           std::to_string(kHeaderBytes) + " bytes, got " +
                                           std::to_string(bytes.size()));
  }
  if (std::memcmp(bytes.data(), magic.data(), 4) != 0) {
    throw Error(ErrorCode::kBadMagic, std::string("expected magic ") + std::string(magic));
  }
  ByteReader reader(bytes.subspan(4));
  const std::uint32_t version = reader.u32();
  if (version != kVersion) {
    throw Error(ErrorCode::kVersionMismatch, std::string(magic) + ": unsupported version " +
                                                 std::to_string(version));
  }
  return reader;
}

void require_reserved(bool ok, std::string_view magic) {
  if (!ok) throw Error(ErrorCode::kIntegrity, std::string(magic) + ": reserved bytes not zero");
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, std::string_view magic) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw Error(ErrorCode::kIntegrity, std::string(magic) + ": header sizes overflow");
  }
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, std::string_view magic) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a) {
    throw Error(ErrorCode::kIntegrity, std::string(magic) + ": header sizes overflow");
  }
  return a + b;
}

void require_length(std::span<const std::uint8_t> bytes, std::uint64_t expected,
                    std::string_view magic) {
  if (bytes.size() < expected) {
    throw Error(ErrorCode::kTruncated, std::string(magic) + ": expected " +
                                           std::to_string(expected) + " bytes, got " +
                                           std::to_string(bytes.size()));
  }
  if (bytes.size() > expected) {
    throw Error(ErrorCode::kIntegrity, std::string(magic) + ": expected " +
                                           std::to_string(expected) + " bytes, got " +
                                           std::to_string(bytes.size()) + " (trailing data)");
  }
}

std::uint32_t narrow_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kRange, std::string(what) + " does not fit in 32 bits");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<std::uint8_t> encode_hbem(const EmbeddingMatrix& x) {
  ByteWriter w;
  w.magic("HBEM");
  w.u32(kVersion);
  w.u64(x.rows());
  w.u32(narrow_u32(x.dim(), "HBEM d"));
  w.u8(0);
  w.zeros(3);
  for (float v : x.values()) w.u32(std::bit_cast<std::uint32_t>(v));
  return w.take();
}

EmbeddingMatrix decode_hbem(std::span<const std::uint8_t> bytes) {
  ByteReader r = open_header(bytes, "HBEM");
  const std::uint64_t n = r.u64();
  const std::uint32_t d = r.u32();
  const std::uint8_t dtype = r.u8();
  require_reserved(r.zeros(3), "HBEM");
  if (dtype != 0) {
    throw Error(ErrorCode::kIntegrity, "HBEM: unsupported dtype " + std::to_string(dtype));
  }
  if (d == 0) throw Error(ErrorCode::kIntegrity, "HBEM: d must be >= 1");
  const std::uint64_t count = checked_mul(n, d, "HBEM");
  require_length(bytes, checked_add(kHeaderBytes, checked_mul(count, 4, "HBEM"), "HBEM"), "HBEM");
  std::vector<float> values(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    values[i] = r.f32();
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::kNonFinite, "HBEM: non-finite value in row " + std::to_string(i / d));
    }
  }
  if (n == 0) return EmbeddingMatrix(d);
  return EmbeddingMatrix(n, d, std::move(values));
}

std::vector<std::uint8_t> encode_hblb(const LabelSet& labels,
                                      std::optional<std::uint8_t> encoding) {
  const std::uint8_t enc = encoding.value_or(labels.single_label() ? 1 : 0);
  if (enc > 1) throw Error(ErrorCode::kInvalidArgument, "HBLB: unknown encoding");
  if (enc == 1 && !labels.single_label()) {
    throw Error(ErrorCode::kInvalidArgument, "HBLB: class-id encoding needs single labels");
  }
  ByteWriter w;
  w.magic("HBLB");
  w.u32(kVersion);
  w.u64(labels.size());
  w.u32(narrow_u32(labels.classes(), "HBLB c"));
  w.u8(enc);
  w.zeros(3);
  const std::size_t row_bytes = (labels.classes() + 7) / 8;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (enc == 1) {
      w.u32(labels.labels(i).front());
      continue;
    }
    const auto row = labels.row(i);
    for (std::size_t b = 0; b < row_bytes; ++b) {
      w.u8(static_cast<std::uint8_t>(row[b / 8] >> (8 * (b % 8))));
    }
  }
  return w.take();
}

LabelSet decode_hblb(std::span<const std::uint8_t> bytes) {
  ByteReader r = open_header(bytes, "HBLB");
  const std::uint64_t n = r.u64();
  const std::uint32_t c = r.u32();
  const std::uint8_t enc = r.u8();
  require_reserved(r.zeros(3), "HBLB");
  if (enc > 1) throw Error(ErrorCode::kIntegrity, "HBLB: unknown encoding " + std::to_string(enc));
  if (c == 0) throw Error(ErrorCode::kIntegrity, "HBLB: class count must be >= 1");
  const std::uint64_t row_bytes = enc == 1 ? 4 : (std::uint64_t{c} + 7) / 8;
  require_length(bytes,
                 checked_add(kHeaderBytes, checked_mul(n, row_bytes, "HBLB"), "HBLB"), "HBLB");
  LabelSet labels(c);
  std::vector<std::uint32_t> ids;
  for (std::uint64_t i = 0; i < n; ++i) {
    ids.clear();
    if (enc == 1) {
      ids.push_back(r.u32());
    } else {
      for (std::uint64_t b = 0; b < row_bytes; ++b) {
        const std::uint8_t byte = r.u8();
        for (unsigned bit = 0; bit < 8; ++bit) {
          if ((byte >> bit) & 1u) ids.push_back(static_cast<std::uint32_t>(8 * b + bit));
        }
      }
    }
    for (std::uint32_t id : ids) {
      if (id >= c) {
        throw Error(ErrorCode::kRange, "HBLB: item " + std::to_string(i) + " has class id " +
                                           std::to_string(id) + " >= c=" + std::to_string(c));
      }
    }
    if (ids.empty()) {
      throw Error(ErrorCode::kIntegrity, "HBLB: item " + std::to_string(i) + " has no label");
    }
    labels.append(ids);
  }
  return labels;
}

std::vector<std::uint8_t> encode_hbmd(const HashModel& model) {
  const std::size_t d = model.dim();
  const std::size_t k = model.bits();
  ByteWriter w;
  w.magic("HBMD");
  w.u32(kVersion);
  w.u32(narrow_u32(d, "HBMD d"));
  w.u32(narrow_u32(k, "HBMD k"));
  const HashFlags flags = model.flags();
  w.u8(static_cast<std::uint8_t>((flags.l2_normalize ? 1u : 0u) | (flags.mean_center ? 2u : 0u)));
  w.zeros(7);
  w.u64(model.seed());
  for (double m : model.mean()) w.f32(m);
  for (double v : model.basis().values()) w.f32(v);
  for (double v : model.rotation().values()) w.f32(v);
  return w.take();
}

HashModel decode_hbmd(std::span<const std::uint8_t> bytes) {
  ByteReader r = open_header(bytes, "HBMD");
  const std::uint32_t d = r.u32();
  const std::uint32_t k = r.u32();
  const std::uint8_t flag_bits = r.u8();
  require_reserved(r.zeros(7), "HBMD");
  if (flag_bits & ~std::uint8_t{3}) {
    throw Error(ErrorCode::kIntegrity, "HBMD: unknown flag bits " + std::to_string(flag_bits));
  }
  if (d == 0 || k == 0 || k > d) {
    throw Error(ErrorCode::kIntegrity, "HBMD: need 1 <= k <= d, got d=" + std::to_string(d) +
                                           " k=" + std::to_string(k));
  }
  const std::uint64_t reals =
      checked_add(checked_add(d, checked_mul(d, k, "HBMD"), "HBMD"), checked_mul(k, k, "HBMD"),
                  "HBMD");
  require_length(bytes, checked_add(kHeaderBytes + 8, checked_mul(reals, 4, "HBMD"), "HBMD"),
                 "HBMD");
  const std::uint64_t seed = r.u64();
  auto read_reals = [&](std::size_t count) {
    std::vector<double> out(count);
    for (double& v : out) v = r.f32();
    return out;
  };
  std::vector<double> mean = read_reals(d);
  DenseMatrix basis(d, k, read_reals(std::size_t{d} * k));
  DenseMatrix rotation(k, k, read_reals(std::size_t{k} * k));
  const HashFlags flags{(flag_bits & 1u) != 0, (flag_bits & 2u) != 0};
  return HashModel::from_parts(std::move(mean), std::move(basis), std::move(rotation), seed,
                               flags);
}

std::vector<std::uint8_t> encode_hbcd(const CodeDatabase& codes) {
  ByteWriter w;
  w.magic("HBCD");
  w.u32(kVersion);
  w.u64(codes.size());
  w.u32(narrow_u32(codes.bits(), "HBCD k"));
  w.zeros(4);
  for (std::uint64_t word : codes.words()) w.u64(word);
  return w.take();
}

CodeDatabase decode_hbcd(std::span<const std::uint8_t> bytes) {
  ByteReader r = open_header(bytes, "HBCD");
  const std::uint64_t n = r.u64();
  const std::uint32_t k = r.u32();
  require_reserved(r.zeros(4), "HBCD");
  if (k == 0) throw Error(ErrorCode::kIntegrity, "HBCD: k must be >= 1");
  const std::uint64_t words = checked_mul(n, words_for_bits(k), "HBCD");
  require_length(bytes, checked_add(kHeaderBytes, checked_mul(words, 8, "HBCD"), "HBCD"), "HBCD");
  std::vector<std::uint64_t> payload(words);
  for (auto& word : payload) word = r.u64();
  return CodeDatabase(n, k, std::move(payload));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  if (size > 0 && !in.read(reinterpret_cast<char*>(bytes.data()), size)) {
    throw Error(ErrorCode::kIo, "cannot read " + path.string());
  }
  return bytes;
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot create " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot rename onto " + path.string());
  }
}

EmbeddingMatrix read_hbem(const std::filesystem::path& path) { return decode_hbem(read_file(path)); }
void write_hbem(const EmbeddingMatrix& x, const std::filesystem::path& path) {
  write_file_atomic(path, encode_hbem(x));
}

LabelSet read_hblb(const std::filesystem::path& path) { return decode_hblb(read_file(path)); }
void write_hblb(const LabelSet& labels, const std::filesystem::path& path,
                std::optional<std::uint8_t> encoding) {
  write_file_atomic(path, encode_hblb(labels, encoding));
}

HashModel read_hbmd(const std::filesystem::path& path) { return decode_hbmd(read_file(path)); }
void write_hbmd(const HashModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, encode_hbmd(model));
}

CodeDatabase read_hbcd(const std::filesystem::path& path) { return decode_hbcd(read_file(path)); }
void write_hbcd(const CodeDatabase& codes, const std::filesystem::path& path) {
  write_file_atomic(path, encode_hbcd(codes));
}

}  // namespace hashbase
