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
#include <optional>
#include <span>
#include <vector>

#include "seconnds/rings.hpp"
#include "seconnds/session.hpp"

namespace seconnds {

/// Shares of 1{signed_view(x) >= 0}. Needs ring.bits() >= 2.
std::vector<std::uint8_t> drelu(Session& s, Tag tag, const Ring& ring,
                                std::span<const std::uint64_t> x);

/// Additive shares of d * x for XOR-shared d: one COT in each direction.
std::vector<std::uint64_t> mux(Session& s, Tag tag, const Ring& ring,
                               std::span<const std::uint8_t> d,
                               std::span<const std::uint64_t> x);

std::vector<std::uint64_t> relu(Session& s, Tag tag, const Ring& ring,
                                std::span<const std::uint64_t> x);

enum class TruncMode : std::uint8_t {
  kMsbKnown,  // secret known to lie in [0, 2^{b-1}); wrap is one AND
  kGeneral,   // unsigned input anywhere in the ring; wrap is a b-bit comparison
  kSigned,    // two's-complement input, arithmetic shift
};

/// Per-party shift with wrap correction. The result is floor(x / 2^shift) or
/// one less.
std::vector<std::uint64_t> truncate(Session& s, Tag tag, const Ring& ring,
                                    std::span<const std::uint64_t> x, unsigned shift,
                                    TruncMode mode);

/// Shares of 1{x0 + x1 >= 2^b} for the shares x_p of this party.
std::vector<std::uint8_t> wrap_bits(Session& s, Tag tag, const Ring& ring,
                                    std::span<const std::uint64_t> x, bool msb_known);

/// Replaces the shares with (-rho, x + rho) for a fresh server mask rho.
/// One server-to-client message.
std::vector<std::uint64_t> reshare(Session& s, Tag tag, const Ring& ring,
                                   std::span<const std::uint64_t> x);

/// Row-major windows: x holds n windows of `window` elements each.
std::vector<std::uint64_t> maxpool(Session& s, Tag tag, const Ring& ring,
                                   std::span<const std::uint64_t> x, std::size_t window);

/// floor(window sum / window) up to an error in {-2, -1, 0}; power-of-two
/// windows go through signed truncation. Window sums must lie strictly
/// within 2^{b-1} - window of zero.
std::vector<std::uint64_t> avgpool(Session& s, Tag tag, const Ring& ring,
                                   std::span<const std::uint64_t> x, std::size_t window);

/// Index of the largest signed value, lowest index on ties. Only the client
/// learns it; the server gets nullopt.
std::optional<std::uint64_t> argmax(Session& s, Tag tag, const Ring& ring,
                                    std::span<const std::uint64_t> x);

/// Differences between candidates must stay within half the ring.
struct ArgmaxShares {
  std::vector<std::uint64_t> value;
  std::vector<std::uint64_t> index;
};
/// Tournament over every row of `rows` x `k` values, returning shares of the
/// winner's value and index per row.
ArgmaxShares argmax_shares(Session& s, Tag tag, const Ring& ring,
                           std::span<const std::uint64_t> x, std::size_t k);

/// Closed-form per-element budgets, one party's view.
struct OpBudget {
  std::uint64_t ands = 0;
  std::uint64_t cots = 0;
};
OpBudget drelu_budget(unsigned bits, MillVariant v);
OpBudget relu_budget(unsigned bits, MillVariant v);
OpBudget trunc_budget(unsigned bits, TruncMode mode, MillVariant v);

}  // namespace seconnds
