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

#include "seconnds/nonlinear.hpp"

#include <bit>

#include "seconnds/boolean.hpp"
#include "seconnds/compare.hpp"
#include "seconnds/errors.hpp"
#include "seconnds/obliv.hpp"

namespace seconnds {

std::vector<std::uint8_t> drelu(Session& s, Tag tag, const Ring& ring,
                                std::span<const std::uint64_t> x) {
  if (ring.bits() < 2) throw DomainError("drelu needs at least 2 ring bits");
  const unsigned low_bits = ring.bits() - 1;
  const std::uint64_t low_mask = (std::uint64_t{1} << low_bits) - 1;
  std::vector<std::uint64_t> in(x.size());
  std::vector<std::uint8_t> msb(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    msb[i] = ring.msb(x[i]) ? 1 : 0;
    const std::uint64_t low = x[i] & low_mask;
    in[i] = s.is_server() ? low : low_mask - low;
  }
  auto w = mill(s, tag, low_bits, true, in);
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = xor_public(s.party(), msb[i] ^ w[i], 1);
  return w;
}

std::vector<std::uint64_t> mux(Session& s, Tag tag, const Ring& ring,
                               std::span<const std::uint8_t> d,
                               std::span<const std::uint64_t> x) {
  if (d.size() != x.size()) throw DomainError("mux: length mismatch");
  const std::size_t n = x.size();
  std::vector<std::uint64_t> deltas(n);
  std::vector<std::uint8_t> choices(n);
  for (std::size_t i = 0; i < n; ++i) {
    choices[i] = d[i] & 1;
    deltas[i] = choices[i] ? ring.neg(x[i]) : ring.reduce(x[i]);
  }
  const auto cot = cot_exchange(s.channel(), s.cot_engine(), s.prg(Stream::kCot), tag, ring,
                                deltas, choices);
  std::vector<std::uint64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t own = choices[i] ? ring.reduce(x[i]) : 0;
    out[i] = ring.sub(ring.add(own, cot.m_r[i]), cot.m_s[i]);
  }
  return out;
}

std::vector<std::uint64_t> relu(Session& s, Tag tag, const Ring& ring,
                                std::span<const std::uint64_t> x) {
  const auto d = drelu(s, tag, ring, x);
  return mux(s, tag, ring, d, x);
}

std::vector<std::uint8_t> wrap_bits(Session& s, Tag tag, const Ring& ring,
                                    std::span<const std::uint64_t> x, bool msb_known) {
  const std::size_t n = x.size();
  if (msb_known) {
    // Both shares of a value below 2^{b-1} sum past 2^b exactly when either
    // share has its top bit set: w = NOT(NOT msb0 AND NOT msb1).
    std::vector<std::uint8_t> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint8_t not_msb = ring.msb(x[i]) ? 0 : 1;
      u[i] = s.is_server() ? not_msb : 0;
      v[i] = s.is_server() ? 0 : not_msb;
    }
    auto z = and_batch(s, tag, u, v);
    for (auto& b : z) b = xor_public(s.party(), b, 1);
    return z;
  }
  std::vector<std::uint64_t> in(n);
  for (std::size_t i = 0; i < n; ++i) {
    in[i] = s.is_server() ? ring.reduce(x[i]) : ring.mask() - ring.reduce(x[i]);
  }
  return mill(s, tag, ring.bits(), true, in);
}

namespace {

std::vector<std::uint64_t> shift_and_correct(Session& s, Tag tag, const Ring& ring,
                                             std::span<const std::uint64_t> x, unsigned shift,
                                             bool msb_known) {
  const auto w = wrap_bits(s, tag, ring, x, msb_known);
  const auto wa = b2a(s, tag, ring, w);
  const std::uint64_t step = std::uint64_t{1} << (ring.bits() - shift);
  std::vector<std::uint64_t> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = ring.sub(ring.reduce(x[i]) >> shift, ring.mul(wa[i], step));
  }
  return out;
}

}  // namespace

std::vector<std::uint64_t> truncate(Session& s, Tag tag, const Ring& ring,
                                    std::span<const std::uint64_t> x, unsigned shift,
                                    TruncMode mode) {
  if (shift == 0 || shift >= ring.bits()) throw DomainError("truncate: shift out of range");
  if (mode != TruncMode::kSigned) {
    return shift_and_correct(s, tag, ring, x, shift, mode == TruncMode::kMsbKnown);
  }
  const std::uint64_t bias = ring.modulus_half();
  std::vector<std::uint64_t> biased(x.begin(), x.end());
  if (s.is_server()) {
    for (auto& v : biased) v = ring.add(v, bias);
  }
  auto out = shift_and_correct(s, tag, ring, biased, shift, false);
  if (s.is_server()) {
    for (auto& v : out) v = ring.sub(v, bias >> shift);
  }
  return out;
}

std::vector<std::uint64_t> reshare(Session& s, Tag tag, const Ring& ring,
                                   std::span<const std::uint64_t> x) {
  std::vector<std::uint64_t> out(x.size());
  if (s.is_server()) {
    auto& prg = s.prg(Stream::kMask);
    std::vector<std::uint64_t> masked(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const std::uint64_t rho = ring.random(prg);
      masked[i] = ring.add(x[i], rho);
      out[i] = ring.neg(rho);
    }
    s.channel().send_frame(tag, pack_words(masked, ring.bits()), PayloadClass::kMaskedValues);
  } else {
    const auto masked = unpack_words(s.channel().recv_frame(tag), x.size(), ring.bits());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = ring.add(x[i], masked[i]);
  }
  return out;
}

std::vector<std::uint64_t> maxpool(Session& s, Tag tag, const Ring& ring,
                                   std::span<const std::uint64_t> x, std::size_t window) {
  if (window == 0) throw DomainError("maxpool: empty window");
  if (x.size() % window) throw DomainError("maxpool: input is not a whole number of windows");
  const std::size_t n = x.size() / window;
  std::vector<std::uint64_t> o(n), diff(n);
  for (std::size_t j = 0; j < n; ++j) o[j] = x[j * window];
  for (std::size_t k = 1; k < window; ++k) {
    for (std::size_t j = 0; j < n; ++j) diff[j] = ring.sub(o[j], x[j * window + k]);
    const auto r = relu(s, tag, ring, diff);
    for (std::size_t j = 0; j < n; ++j) o[j] = ring.add(r[j], x[j * window + k]);
  }
  return o;
}

std::vector<std::uint64_t> avgpool(Session& s, Tag tag, const Ring& ring,
                                   std::span<const std::uint64_t> x, std::size_t window) {
  if (window == 0) throw DomainError("avgpool: window must be positive");
  if (x.size() % window) throw DomainError("avgpool: input is not a whole number of windows");
  const std::size_t n = x.size() / window;
  std::vector<std::uint64_t> sum(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < window; ++k) sum[j] = ring.add(sum[j], x[j * window + k]);
  }
  if (window == 1) return sum;
  if (std::has_single_bit(window)) {
    return truncate(s, tag, ring, sum, static_cast<unsigned>(std::countr_zero(window)),
                    TruncMode::kSigned);
  }
  const std::uint64_t w = window;
  const std::uint64_t modulus = ring.mask() + 1;
  const std::uint64_t bias = w * ((ring.modulus_half() + w - 1) / w);
  const std::uint64_t correction = (modulus + w - 1) / w;
  if (s.is_server()) {
    for (auto& v : sum) v = ring.add(v, bias);
  }
  const auto wrap = wrap_bits(s, tag, ring, sum, false);
  const auto wa = b2a(s, tag, ring, wrap);
  std::vector<std::uint64_t> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = ring.sub(sum[j] / w, ring.mul(wa[j], correction));
    if (s.is_server()) out[j] = ring.sub(out[j], bias / w);
  }
  return out;
}

ArgmaxShares argmax_shares(Session& s, Tag tag, const Ring& ring,
                           std::span<const std::uint64_t> x, std::size_t k) {
  if (k == 0) throw DomainError("argmax: empty input");
  if (x.size() % k) throw DomainError("argmax: input is not a whole number of rows");
  const std::size_t rows = x.size() / k;
  std::vector<std::vector<std::uint64_t>> val(rows), idx(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    val[r].assign(x.begin() + static_cast<std::ptrdiff_t>(r * k),
                  x.begin() + static_cast<std::ptrdiff_t>((r + 1) * k));
    idx[r].resize(k);
    for (std::size_t j = 0; j < k; ++j) idx[r][j] = s.is_server() ? j : 0;
  }
  std::size_t width = k;
  while (width > 1) {
    const std::size_t pairs = width / 2;
    std::vector<std::uint64_t> diff;
    diff.reserve(rows * pairs);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t i = 0; i < pairs; ++i) {
        diff.push_back(ring.sub(val[r][2 * i], val[r][2 * i + 1]));
      }
    }
    const auto d = drelu(s, tag, ring, diff);
    // Selects the low candidate when d = 1: winner = high + d * (low - high).
    std::vector<std::uint8_t> sel(2 * d.size());
    std::vector<std::uint64_t> delta(2 * d.size());
    std::size_t t = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t i = 0; i < pairs; ++i, ++t) {
        sel[t] = sel[d.size() + t] = d[t];
        delta[t] = diff[t];
        delta[d.size() + t] = ring.sub(idx[r][2 * i], idx[r][2 * i + 1]);
      }
    }
    const auto m = mux(s, tag, ring, sel, delta);
    const std::size_t next = (width + 1) / 2;
    t = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::uint64_t> nv(next), ni(next);
      for (std::size_t i = 0; i < pairs; ++i, ++t) {
        nv[i] = ring.add(val[r][2 * i + 1], m[t]);
        ni[i] = ring.add(idx[r][2 * i + 1], m[d.size() + t]);
      }
      if (width % 2) {
        nv[next - 1] = val[r][width - 1];
        ni[next - 1] = idx[r][width - 1];
      }
      val[r] = std::move(nv);
      idx[r] = std::move(ni);
    }
    width = next;
  }
  ArgmaxShares out;
  for (std::size_t r = 0; r < rows; ++r) {
    out.value.push_back(val[r][0]);
    out.index.push_back(idx[r][0]);
  }
  return out;
}

std::optional<std::uint64_t> argmax(Session& s, Tag tag, const Ring& ring,
                                    std::span<const std::uint64_t> x) {
  const auto sh = argmax_shares(s, tag, ring, x, x.size());
  const std::vector<std::uint64_t> mine{sh.index[0]};
  if (s.is_server()) {
    s.channel().send_frame(Tag::kLabel, pack_words(mine, ring.bits()),
                           PayloadClass::kLabelOpening);
    return std::nullopt;
  }
  const auto peer = unpack_words(s.channel().recv_frame(Tag::kLabel), 1, ring.bits());
  return ring.add(peer[0], mine[0]);
}

OpBudget drelu_budget(unsigned bits, MillVariant v) { return {mill_and_count(bits - 1, v), 0}; }

OpBudget relu_budget(unsigned bits, MillVariant v) {
  auto b = drelu_budget(bits, v);
  b.cots += 2;
  return b;
}

OpBudget trunc_budget(unsigned bits, TruncMode mode, MillVariant v) {
  if (mode == TruncMode::kMsbKnown) return {1, 1};
  return {mill_and_count(bits, v), 1};
}

}  // namespace seconnds
