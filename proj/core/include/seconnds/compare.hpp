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

#include "seconnds/session.hpp"

namespace seconnds {

/// Shares of the per-bit equality and strict-inequality indicators, laid out
/// instance-major: bit i of instance k sits at k * bits + i (LSB first).
struct MillLeaves {
  std::vector<std::uint8_t> eq;
  std::vector<std::uint8_t> lg;
};

/// greater = false computes 1{i0 < i1}, greater = true computes 1{i0 > i1},
/// where i0 is the server's input and i1 the client's.
MillLeaves mill_leaves(Session& s, Tag tag, unsigned bits, bool greater,
                       std::span<const std::uint64_t> inputs);

/// Serial combine: b rounds and 2b - 1 ANDs per instance, all instances in lock-step.
std::vector<std::uint8_t> mill_linear(Session& s, Tag tag, unsigned bits, bool greater,
                                      std::span<const std::uint64_t> inputs);

/// Tree combine: 1 + ceil(log2 b) rounds.
std::vector<std::uint8_t> mill_logdepth(Session& s, Tag tag, unsigned bits, bool greater,
                                        std::span<const std::uint64_t> inputs);

/// Dispatches on the session's configured variant.
std::vector<std::uint8_t> mill(Session& s, Tag tag, unsigned bits, bool greater,
                               std::span<const std::uint64_t> inputs);

std::vector<std::uint8_t> mill(Session& s, Tag tag, unsigned bits, bool greater,
                               std::span<const std::uint64_t> inputs, MillVariant variant);

/// AND gates one party meters for one comparison.
std::uint64_t mill_and_count(unsigned bits, MillVariant variant);
std::uint64_t mill_rounds(unsigned bits, MillVariant variant);

unsigned ceil_log2(std::uint64_t x);

}  // namespace seconnds
