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

#include "seconnds/boolean.hpp"

#include "seconnds/errors.hpp"
#include "seconnds/obliv.hpp"

namespace seconnds {

std::vector<std::uint8_t> and_batch(Session& s, Tag tag, std::span<const std::uint8_t> x,
                                    std::span<const std::uint8_t> y) {
  if (x.size() != y.size()) throw DomainError("and_batch: operand lengths differ");
  const std::size_t n = x.size();
  if (n == 0) return {};
  const auto t = s.take_triples(n);

  std::vector<std::uint8_t> ef(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    ef[i] = (t.a[i] ^ x[i]) & 1;
    ef[n + i] = (t.b[i] ^ y[i]) & 1;
  }
  std::vector<std::uint8_t> peer(2 * n);
  unpack_bits(s.channel().exchange(tag, pack_bits(ef), PayloadClass::kCorrectionBits), peer);

  const std::uint8_t p_prime = s.is_server() ? 1 : 0;
  std::vector<std::uint8_t> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t e = ef[i] ^ peer[i];
    const std::uint8_t f = ef[n + i] ^ peer[n + i];
    z[i] = static_cast<std::uint8_t>((p_prime & e & f) ^ (e & t.b[i]) ^ (f & t.a[i]) ^ t.c[i]);
  }
  s.channel().record_and_gates(tag, n);
  s.channel().record_triples(tag, n);
  return z;
}

std::uint8_t and_gate(Session& s, Tag tag, std::uint8_t x, std::uint8_t y) {
  const std::uint8_t xs[1] = {x};
  const std::uint8_t ys[1] = {y};
  return and_batch(s, tag, xs, ys)[0];
}

std::vector<std::uint64_t> b2a(Session& s, Tag tag, const Ring& ring,
                               std::span<const std::uint8_t> w) {
  const std::size_t n = w.size();
  std::vector<std::uint64_t> out(n);
  if (s.is_server()) {
    std::vector<std::uint64_t> deltas(n);
    for (std::size_t i = 0; i < n; ++i) deltas[i] = ring.neg(2 * (w[i] & 1));
    const auto m_s = cot_send(s.channel(), s.cot_engine(), s.prg(Stream::kCot), tag, ring, deltas);
    for (std::size_t i = 0; i < n; ++i) out[i] = ring.sub(w[i] & 1, m_s[i]);
  } else {
    std::vector<std::uint8_t> choices(n);
    for (std::size_t i = 0; i < n; ++i) choices[i] = w[i] & 1;
    const auto m_r =
        cot_recv(s.channel(), s.cot_engine(), s.prg(Stream::kCot), tag, ring, choices);
    for (std::size_t i = 0; i < n; ++i) out[i] = ring.add(w[i] & 1, m_r[i]);
  }
  return out;
}

}  // namespace seconnds
