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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "seconnds/bytes.hpp"
#include "seconnds/rings.hpp"

namespace seconnds {

/// Fixed-point tensor over Z_{2^b}, row-major. Shape is [C, H, W] for feature
/// maps, [rows, cols] for matrices, [n] for vectors and [O, C, kh, kw] for
/// convolution kernels.
struct QuantTensor {
  std::vector<std::uint32_t> dims;
  std::vector<std::uint64_t> data;
  unsigned bits = 37;
  unsigned scale = 0;

  QuantTensor() = default;
  QuantTensor(std::vector<std::uint32_t> dims, unsigned bits, unsigned scale = 0);

  std::size_t size() const { return data.size(); }
  std::size_t rank() const { return dims.size(); }
  static std::size_t count(std::span<const std::uint32_t> dims);

  /// Throws ValidationError if data length or element range is inconsistent.
  void validate() const;

  bool operator==(const QuantTensor&) const = default;
};

// SCNT: "SCNT" | u16 version=1 | u8 bits | u8 scale | u8 ndims | u32 dims... | u64 elems...
void write_tensor(ByteWriter& w, const QuantTensor& t);
QuantTensor read_tensor(ByteReader& r);
Bytes encode_tensor(const QuantTensor& t);
QuantTensor decode_tensor(std::span<const std::uint8_t> data);

void save_tensor(const std::filesystem::path& path, const QuantTensor& t);
QuantTensor load_tensor(const std::filesystem::path& path);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);

}  // namespace seconnds
