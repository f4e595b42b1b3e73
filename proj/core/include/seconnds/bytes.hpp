// Copyright 2026 The seconnds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>
#include <vector>

#include "seconnds/errors.hpp"

namespace seconnds {

using Bytes = std::vector<std::uint8_t>;

/// Little-endian append-only encoder.
class ByteWriter {
 public:
  ByteWriter() = default;
  explicit ByteWriter(std::size_t reserve) { buf_.reserve(reserve); }

  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) { put_le(v, 2); }
  void u32(std::uint32_t v) { put_le(v, 4); }
  void u64(std::uint64_t v) { put_le(v, 8); }
  void raw(std::span<const std::uint8_t> data) { buf_.insert(buf_.end(), data.begin(), data.end()); }
  void tag(std::string_view magic) { buf_.insert(buf_.end(), magic.begin(), magic.end()); }
  void u64s(std::span<const std::uint64_t> values) {
    for (auto v : values) u64(v);
  }

  std::size_t size() const { return buf_.size(); }
  Bytes& bytes() { return buf_; }
  Bytes take() { return std::move(buf_); }

 private:
  void put_le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  Bytes buf_;
};

/// Bounds-checked little-endian decoder over a borrowed buffer.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get_le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
  std::uint64_t u64() { return get_le(8); }
  std::span<const std::uint8_t> raw(std::size_t n) {
    need(n);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  void expect_tag(std::string_view magic) {
    auto s = raw(magic.size());
    if (std::memcmp(s.data(), magic.data(), magic.size()) != 0) {
      throw FormatError("bad magic, expected '" + std::string(magic) + "'");
    }
  }
  void u64s(std::span<std::uint64_t> out) {
    for (auto& v : out) v = u64();
  }

  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw FormatError("truncated input");
  }
  std::uint64_t get_le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

/// Packs a 0/1 byte-per-bit vector into LSB-first bytes.
inline Bytes pack_bits(std::span<const std::uint8_t> bits) {
  Bytes out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    out[i >> 3] |= static_cast<std::uint8_t>((bits[i] & 1) << (i & 7));
  }
  return out;
}

inline void unpack_bits(std::span<const std::uint8_t> packed, std::span<std::uint8_t> bits) {
  if (packed.size() * 8 < bits.size()) throw FormatError("packed bit string too short");
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = (packed[i >> 3] >> (i & 7)) & 1;
}

/// Packs values of `width` bits each into a dense LSB-first bit stream.
inline Bytes pack_words(std::span<const std::uint64_t> values, unsigned width) {
  Bytes out((values.size() * width + 7) / 8, 0);
  std::size_t bitpos = 0;
  for (auto v : values) {
    for (unsigned k = 0; k < width; ++k, ++bitpos) {
      out[bitpos >> 3] |= static_cast<std::uint8_t>(((v >> k) & 1) << (bitpos & 7));
    }
  }
  return out;
}

inline std::vector<std::uint64_t> unpack_words(std::span<const std::uint8_t> packed,
                                               std::size_t count, unsigned width) {
  if (packed.size() * 8 < count * width) throw FormatError("packed word stream too short");
  std::vector<std::uint64_t> out(count, 0);
  std::size_t bitpos = 0;
  for (auto& v : out) {
    for (unsigned k = 0; k < width; ++k, ++bitpos) {
      v |= static_cast<std::uint64_t>((packed[bitpos >> 3] >> (bitpos & 7)) & 1) << k;
    }
  }
  return out;
}

}  // namespace seconnds
