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

#include "seconnds/tensor.hpp"

#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

#include "seconnds/errors.hpp"

namespace seconnds {

namespace {
constexpr std::uint16_t kTensorVersion = 1;
}

QuantTensor::QuantTensor(std::vector<std::uint32_t> d, unsigned b, unsigned s)
    : dims(std::move(d)), data(count(dims), 0), bits(b), scale(s) {}

std::size_t QuantTensor::count(std::span<const std::uint32_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         [](std::size_t a, std::uint32_t d) { return a * d; });
}

void QuantTensor::validate() const {
  if (bits < 1 || bits > kMaxRingBits) throw ValidationError("tensor bit-width out of range");
  if (dims.empty() || dims.size() > 255) throw ValidationError("tensor rank out of range");
  if (data.size() != count(dims)) {
    throw ValidationError("tensor data length " + std::to_string(data.size()) +
                          " does not match dims");
  }
  const Ring ring(bits);
  for (auto v : data) {
    if (!ring.contains(v)) throw ValidationError("tensor element exceeds bit-width");
  }
}

void write_tensor(ByteWriter& w, const QuantTensor& t) {
  t.validate();
  w.tag("SCNT");
  w.u16(kTensorVersion);
  w.u8(static_cast<std::uint8_t>(t.bits));
  w.u8(static_cast<std::uint8_t>(t.scale));
  w.u8(static_cast<std::uint8_t>(t.dims.size()));
  for (auto d : t.dims) w.u32(d);
  w.u64s(t.data);
}

QuantTensor read_tensor(ByteReader& r) {
  r.expect_tag("SCNT");
  if (r.u16() != kTensorVersion) throw FormatError("unsupported SCNT version");
  QuantTensor t;
  t.bits = r.u8();
  t.scale = r.u8();
  const unsigned nd = r.u8();
  t.dims.resize(nd);
  for (auto& d : t.dims) d = r.u32();
  const std::size_t n = QuantTensor::count(t.dims);
  if (r.remaining() / 8 < n) throw FormatError("SCNT payload truncated");
  t.data.resize(n);
  r.u64s(t.data);
  try {
    t.validate();
  } catch (const ValidationError& e) {
    throw FormatError(std::string("invalid SCNT tensor: ") + e.what());
  }
  return t;
}

Bytes encode_tensor(const QuantTensor& t) {
  ByteWriter w;
  write_tensor(w, t);
  return w.take();
}

QuantTensor decode_tensor(std::span<const std::uint8_t> data) {
  ByteReader r(data);
  auto t = read_tensor(r);
  if (!r.done()) throw FormatError("trailing bytes after SCNT tensor");
  return t;
}

void save_tensor(const std::filesystem::path& path, const QuantTensor& t) {
  write_file(path, encode_tensor(t));
}

QuantTensor load_tensor(const std::filesystem::path& path) { return decode_tensor(read_file(path)); }

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

}  // namespace seconnds
