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

#include "seconnds/rings.hpp"

#include <string>

#include "seconnds/errors.hpp"

namespace seconnds {

Ring::Ring(unsigned bits) : bits_(bits) {
  if (bits < 1 || bits > kMaxRingBits) {
    throw DomainError("ring bit-width " + std::to_string(bits) + " outside [1, 44]");
  }
  mask_ = bits == 64 ? ~0ULL : (1ULL << bits) - 1;
}

std::int64_t Ring::signed_view(std::uint64_t x) const {
  check(x);
  return msb(x) ? static_cast<std::int64_t>(x) - static_cast<std::int64_t>(1ULL << bits_)
                : static_cast<std::int64_t>(x);
}

void Ring::check(std::uint64_t x) const {
  if (!contains(x)) {
    throw DomainError("value " + std::to_string(x) + " does not fit in " +
                      std::to_string(bits_) + " bits");
  }
}

void RingParams::validate() const {
  if (bits < 2 || bits > kMaxRingBits) throw DomainError("bit-width must be in [2, 44]");
  if (scale >= bits) throw DomainError("scale must be smaller than the bit-width");
}

std::pair<ArithShare, ArithShare> share_split(const Ring& ring, std::uint64_t x, Prg& prg) {
  return share_split_with(ring, x, ring.random(prg));
}

std::pair<ArithShare, ArithShare> share_split_with(const Ring& ring, std::uint64_t x,
                                                   std::uint64_t server_share) {
  ring.check(x);
  ring.check(server_share);
  return {ArithShare{Party::kServer, server_share},
          ArithShare{Party::kClient, ring.sub(x, server_share)}};
}

std::uint64_t reconstruct(const Ring& ring, const ArithShare& a, const ArithShare& b) {
  if (a.party == b.party) throw DomainError("reconstruct needs one share from each party");
  return ring.add(a.value, b.value);
}

std::uint8_t reconstruct(const BitShare& a, const BitShare& b) {
  if (a.party == b.party) throw DomainError("reconstruct needs one share from each party");
  return (a.value ^ b.value) & 1;
}

std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> share_split(
    const Ring& ring, std::span<const std::uint64_t> x, Prg& prg) {
  std::vector<std::uint64_t> s0(x.size()), s1(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    ring.check(x[i]);
    s0[i] = ring.random(prg);
    s1[i] = ring.sub(x[i], s0[i]);
  }
  return {std::move(s0), std::move(s1)};
}

std::vector<std::uint64_t> reconstruct(const Ring& ring, std::span<const std::uint64_t> s0,
                                       std::span<const std::uint64_t> s1) {
  if (s0.size() != s1.size()) throw DomainError("share vectors differ in length");
  std::vector<std::uint64_t> out(s0.size());
  for (std::size_t i = 0; i < s0.size(); ++i) out[i] = ring.add(s0[i], s1[i]);
  return out;
}

std::vector<std::uint8_t> reconstruct_bits(std::span<const std::uint8_t> s0,
                                           std::span<const std::uint8_t> s1) {
  if (s0.size() != s1.size()) throw DomainError("share vectors differ in length");
  std::vector<std::uint8_t> out(s0.size());
  for (std::size_t i = 0; i < s0.size(); ++i) out[i] = (s0[i] ^ s1[i]) & 1;
  return out;
}

}  // namespace seconnds
