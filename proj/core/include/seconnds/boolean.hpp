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
#include <vector>

#include "seconnds/rings.hpp"
#include "seconnds/session.hpp"

namespace seconnds {

/// Element-wise AND of XOR-shared bit vectors in one round. Consumes one
/// triple per element; the two correction bits of every element travel in
/// one frame each way.
std::vector<std::uint8_t> and_batch(Session& s, Tag tag, std::span<const std::uint8_t> x,
                                    std::span<const std::uint8_t> y);

std::uint8_t and_gate(Session& s, Tag tag, std::uint8_t x, std::uint8_t y);

/// Local XOR with a public constant: only the server flips its share.
inline std::uint8_t xor_public(Party p, std::uint8_t share, std::uint8_t c) {
  return p == Party::kServer ? static_cast<std::uint8_t>(share ^ (c & 1)) : share;
}

/// XOR-shared bits to additive shares over the ring, one COT per element.
std::vector<std::uint64_t> b2a(Session& s, Tag tag, const Ring& ring,
                               std::span<const std::uint8_t> w);

}  // namespace seconnds
