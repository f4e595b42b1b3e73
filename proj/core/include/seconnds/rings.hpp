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
#include <span>
#include <utility>
#include <vector>

#include "seconnds/crypto.hpp"

namespace seconnds {

enum class Party : std::uint8_t { kServer = 0, kClient = 1 };

constexpr unsigned index_of(Party p) { return static_cast<unsigned>(p); }
constexpr Party other(Party p) { return p == Party::kServer ? Party::kClient : Party::kServer; }

constexpr unsigned kMaxRingBits = 44;

/// Z_{2^b} with values held in 64-bit words and masked to b bits after every
/// operation. Masking commutes with wrap-around mod 2^64, so products need no
/// wider intermediate type.
class Ring {
 public:
  explicit Ring(unsigned bits);

  unsigned bits() const { return bits_; }
  std::uint64_t mask() const { return mask_; }
  std::uint64_t modulus_half() const { return 1ULL << (bits_ - 1); }

  std::uint64_t reduce(std::uint64_t x) const { return x & mask_; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) & mask_; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a - b) & mask_; }
  std::uint64_t neg(std::uint64_t a) const { return (0 - a) & mask_; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a * b) & mask_; }

  bool msb(std::uint64_t x) const { return ((x >> (bits_ - 1)) & 1) != 0; }
  /// Two's-complement view in [-2^{b-1}, 2^{b-1}).
  std::int64_t signed_view(std::uint64_t x) const;
  std::uint64_t from_signed(std::int64_t v) const { return static_cast<std::uint64_t>(v) & mask_; }

  /// Throws DomainError when x does not fit in b bits.
  void check(std::uint64_t x) const;
  bool contains(std::uint64_t x) const { return (x & ~mask_) == 0; }

  std::uint64_t random(Prg& prg) const { return prg.next_bits(bits_); }

 private:
  unsigned bits_;
  std::uint64_t mask_;
};

struct RingParams {
  unsigned bits = 37;
  unsigned scale = 12;

  void validate() const;
  Ring ring() const { return Ring(bits); }
};

struct ArithShare {
  Party party = Party::kServer;
  std::uint64_t value = 0;
};

struct BitShare {
  Party party = Party::kServer;
  std::uint8_t value = 0;
};

/// Splits x into two additive shares; the server's share is uniformly random.
std::pair<ArithShare, ArithShare> share_split(const Ring& ring, std::uint64_t x, Prg& prg);

/// Variant with an explicit server share, used to pin test vectors.
std::pair<ArithShare, ArithShare> share_split_with(const Ring& ring, std::uint64_t x,
                                                   std::uint64_t server_share);

std::uint64_t reconstruct(const Ring& ring, const ArithShare& a, const ArithShare& b);
std::uint8_t reconstruct(const BitShare& a, const BitShare& b);

/// Element-wise vector versions: shares[0] is the server vector, shares[1] the client's.
std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> share_split(
    const Ring& ring, std::span<const std::uint64_t> x, Prg& prg);
std::vector<std::uint64_t> reconstruct(const Ring& ring, std::span<const std::uint64_t> s0,
                                       std::span<const std::uint64_t> s1);
std::vector<std::uint8_t> reconstruct_bits(std::span<const std::uint8_t> s0,
                                           std::span<const std::uint8_t> s1);

}  // namespace seconnds
