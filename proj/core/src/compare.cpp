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

#include "seconnds/compare.hpp"

#include "seconnds/boolean.hpp"
#include "seconnds/errors.hpp"
#include "seconnds/rings.hpp"

namespace seconnds {

unsigned ceil_log2(std::uint64_t x) {
  unsigned r = 0;
  while ((std::uint64_t{1} << r) < x) ++r;
  return r;
}

namespace {

void check_bits(unsigned bits, std::span<const std::uint64_t> inputs) {
  if (bits < 1 || bits > kMaxRingBits) throw DomainError("mill: bit-width out of range");
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  for (auto v : inputs) {
    if (v & ~mask) throw DomainError("mill: input exceeds bit-width");
  }
}

}  // namespace

MillLeaves mill_leaves(Session& s, Tag tag, unsigned bits, bool greater,
                       std::span<const std::uint64_t> inputs) {
  check_bits(bits, inputs);
  const std::size_t k = inputs.size();
  const std::uint8_t g = greater ? 1 : 0;
  const std::uint8_t p = s.is_server() ? 0 : 1;
  const std::uint8_t pp = p ^ 1;
  std::vector<std::uint8_t> b0(k * bits);
  std::vector<std::uint8_t> b1(k * bits);
  for (std::size_t j = 0; j < k; ++j) {
    for (unsigned i = 0; i < bits; ++i) {
      const std::uint8_t bit = (inputs[j] >> i) & 1;
      b0[j * bits + i] = (bit ^ g ^ 1) & pp;
      b1[j * bits + i] = (bit ^ g) & p;
    }
  }
  MillLeaves out;
  out.eq.resize(k * bits);
  for (std::size_t i = 0; i < out.eq.size(); ++i) out.eq[i] = b0[i] ^ b1[i];
  out.lg = and_batch(s, tag, b0, b1);
  return out;
}

std::vector<std::uint8_t> mill_linear(Session& s, Tag tag, unsigned bits, bool greater,
                                      std::span<const std::uint64_t> inputs) {
  auto leaves = mill_leaves(s, tag, bits, greater, inputs);
  const std::size_t k = inputs.size();
  std::vector<std::uint8_t> x(k), y(k);
  for (unsigned i = 0; i + 1 < bits; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      x[j] = leaves.eq[j * bits + i + 1];
      y[j] = leaves.lg[j * bits + i];
    }
    const auto z = and_batch(s, tag, x, y);
    for (std::size_t j = 0; j < k; ++j) leaves.lg[j * bits + i + 1] ^= z[j];
  }
  std::vector<std::uint8_t> out(k);
  for (std::size_t j = 0; j < k; ++j) out[j] = leaves.lg[j * bits + bits - 1];
  return out;
}

std::vector<std::uint8_t> mill_logdepth(Session& s, Tag tag, unsigned bits, bool greater,
                                        std::span<const std::uint64_t> inputs) {
  auto leaves = mill_leaves(s, tag, bits, greater, inputs);
  const std::size_t k = inputs.size();
  // Per instance, nodes of the current level in LSB-first order. Node i
  // combines children 2i (low) and 2i + 1 (high); an unpaired last node moves up.
  std::vector<std::uint8_t> lt = std::move(leaves.lg);
  std::vector<std::uint8_t> eq = std::move(leaves.eq);
  std::size_t width = bits;
  while (width > 1) {
    const std::size_t pairs = width / 2;
    const std::size_t next = (width + 1) / 2;
    const std::size_t eq_pairs = pairs - 1;  // node 0 never needs its equality bit
    std::vector<std::uint8_t> x, y;
    x.reserve(k * (pairs + eq_pairs));
    y.reserve(x.capacity());
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t o = j * width;
      for (std::size_t i = 0; i < pairs; ++i) {
        x.push_back(eq[o + 2 * i + 1]);
        y.push_back(lt[o + 2 * i]);
      }
      for (std::size_t i = 1; i < pairs; ++i) {
        x.push_back(eq[o + 2 * i]);
        y.push_back(eq[o + 2 * i + 1]);
      }
    }
    const auto z = and_batch(s, tag, x, y);
    std::vector<std::uint8_t> nlt(k * next), neq(k * next);
    std::size_t zi = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t o = j * width;
      const std::size_t no = j * next;
      for (std::size_t i = 0; i < pairs; ++i) nlt[no + i] = lt[o + 2 * i + 1] ^ z[zi++];
      neq[no] = 0;
      for (std::size_t i = 1; i < pairs; ++i) neq[no + i] = z[zi++];
      if (width % 2) {
        nlt[no + next - 1] = lt[o + width - 1];
        neq[no + next - 1] = eq[o + width - 1];
      }
    }
    lt = std::move(nlt);
    eq = std::move(neq);
    width = next;
  }
  return lt;
}

std::vector<std::uint8_t> mill(Session& s, Tag tag, unsigned bits, bool greater,
                               std::span<const std::uint64_t> inputs, MillVariant variant) {
  return variant == MillVariant::kLinear ? mill_linear(s, tag, bits, greater, inputs)
                                         : mill_logdepth(s, tag, bits, greater, inputs);
}

std::vector<std::uint8_t> mill(Session& s, Tag tag, unsigned bits, bool greater,
                               std::span<const std::uint64_t> inputs) {
  return mill(s, tag, bits, greater, inputs, s.mill_variant());
}

std::uint64_t mill_and_count(unsigned bits, MillVariant variant) {
  if (variant == MillVariant::kLinear) return 2ULL * bits - 1;
  std::uint64_t ands = bits;
  for (std::uint64_t width = bits; width > 1; width = (width + 1) / 2) {
    const std::uint64_t pairs = width / 2;
    ands += pairs + (pairs - 1);
  }
  return ands;
}

std::uint64_t mill_rounds(unsigned bits, MillVariant variant) {
  return variant == MillVariant::kLinear ? bits : 1 + ceil_log2(bits);
}

}  // namespace seconnds
