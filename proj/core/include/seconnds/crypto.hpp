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

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace seconnds {

/// 128-bit string; the unit of OT extension and of the AES-based primitives.
struct Block {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  constexpr Block operator^(const Block& o) const { return {lo ^ o.lo, hi ^ o.hi}; }
  constexpr Block operator&(const Block& o) const { return {lo & o.lo, hi & o.hi}; }
  constexpr Block& operator^=(const Block& o) {
    lo ^= o.lo;
    hi ^= o.hi;
    return *this;
  }
  constexpr bool operator==(const Block&) const = default;
  constexpr bool bit(unsigned i) const {
    return ((i < 64 ? lo >> i : hi >> (i - 64)) & 1) != 0;
  }
};

constexpr Block kZeroBlock{};
constexpr Block kAllOnesBlock{~0ULL, ~0ULL};

/// AES-128 in counter mode. Deterministic for a fixed (seed, stream) pair.
class Prg {
 public:
  using result_type = std::uint64_t;

  explicit Prg(Block seed, std::uint64_t stream = 0);
  ~Prg();
  Prg(Prg&&) noexcept;
  Prg& operator=(Prg&&) noexcept;
  Prg(const Prg&) = delete;
  Prg& operator=(const Prg&) = delete;

  /// Seeded from the operating system's entropy pool.
  static Prg from_os();

  void fill(std::span<std::uint8_t> out);
  void fill_blocks(std::span<Block> out);
  std::uint64_t next_u64();
  Block next_block();
  bool next_bit();

  /// Uniform value in [0, 2^bits), bits <= 64.
  std::uint64_t next_bits(unsigned bits);
  /// Uniform value in [0, bound) by rejection sampling.
  std::uint64_t uniform(std::uint64_t bound);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

 private:
  void refill();

  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::array<std::uint8_t, 4096> buf_{};
  std::size_t pos_ = sizeof(buf_);
  std::uint64_t bit_pool_ = 0;
  unsigned bits_left_ = 0;
};

Block os_random_block();

/// Fixed-key AES-128 permutation, batch-evaluated in ECB mode.
class FixedKeyAes {
 public:
  explicit FixedKeyAes(Block key);
  ~FixedKeyAes();
  FixedKeyAes(FixedKeyAes&&) noexcept;
  FixedKeyAes& operator=(FixedKeyAes&&) noexcept;

  void permute(std::span<const Block> in, std::span<Block> out) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Tweakable correlation-robust hash H(i, x) = pi(pi(x) ^ i) ^ pi(x), with pi a
/// session-keyed fixed-key AES. The tweak i is the global OT instance index.
class CrHash {
 public:
  explicit CrHash(Block session_key);

  void hash(std::span<const Block> in, std::uint64_t first_index, std::span<Block> out) const;
  Block hash_one(const Block& x, std::uint64_t index) const;

 private:
  FixedKeyAes perm_;
};

}  // namespace seconnds
