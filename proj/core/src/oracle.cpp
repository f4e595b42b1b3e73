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

#include "seconnds/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>

#include "seconnds/errors.hpp"
#include "seconnds/linconv.hpp"

namespace seconnds {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

void add_bias(const Ring& ring, std::vector<std::uint64_t>& y, const QuantTensor& bias,
              std::size_t per_channel) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = ring.add(y[i], bias.data[i / per_channel]);
}

const QuantTensor& weight_of(const Model& m, std::size_t index) {
  const auto it = m.weights.find(static_cast<std::uint32_t>(index));
  if (it == m.weights.end()) throw ValidationError("layer " + std::to_string(index) + ": no weights");
  return it->second;
}

}  // namespace

std::vector<std::uint64_t> oracle_layer(const SecProgram& p, std::size_t index, const Model& m,
                                        std::span<const std::uint64_t> x) {
  const Ring ring = p.ring.ring();
  const Layer& L = p.layers.at(index);
  if (x.size() != L.in.size()) throw DomainError("oracle: layer input has the wrong size");
  switch (L.kind) {
    case LayerKind::kConv: {
      auto y = conv2d_reference(ring, conv_shape_of(L), x, weight_of(m, index).data);
      if (L.has_bias) {
        add_bias(ring, y, m.biases.at(static_cast<std::uint32_t>(index)),
                 static_cast<std::size_t>(L.out.dims[1]) * L.out.dims[2]);
      }
      return y;
    }
    case LayerKind::kFc: {
      auto y = matvec_reference(ring, fc_shape_of(L), weight_of(m, index).data, x);
      if (L.has_bias) add_bias(ring, y, m.biases.at(static_cast<std::uint32_t>(index)), 1);
      return y;
    }
    case LayerKind::kRelu: {
      std::vector<std::uint64_t> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = ring.msb(x[i]) ? 0 : x[i];
      return y;
    }
    case LayerKind::kTrunc: {
      std::vector<std::uint64_t> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (L.trunc_mode == TruncMode::kSigned) {
          y[i] = ring.from_signed(ring.signed_view(x[i]) >> L.shift);
        } else {
          y[i] = x[i] >> L.shift;
        }
      }
      return y;
    }
    case LayerKind::kMaxPool:
    case LayerKind::kAvgPool: {
      const auto idx = pool_gather_index(L);
      const std::size_t w = static_cast<std::size_t>(L.kernel_h) * L.kernel_w;
      std::vector<std::uint64_t> y(idx.size() / w);
      for (std::size_t j = 0; j < y.size(); ++j) {
        std::int64_t best = ring.signed_view(x[idx[j * w]]);
        std::int64_t sum = 0;
        for (std::size_t k = 0; k < w; ++k) {
          const std::int64_t v = ring.signed_view(x[idx[j * w + k]]);
          best = std::max(best, v);
          sum += v;
        }
        y[j] = ring.from_signed(L.kind == LayerKind::kMaxPool
                                    ? best
                                    : floor_div(sum, static_cast<std::int64_t>(w)));
      }
      return y;
    }
    case LayerKind::kArgMax:
      return {signed_argmax(ring, x)};
  }
  throw StateError("unknown layer kind");
}

std::uint64_t signed_argmax(const Ring& ring, std::span<const std::uint64_t> x) {
  if (x.empty()) throw DomainError("argmax of an empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (ring.signed_view(x[i]) > ring.signed_view(x[best])) best = i;
  }
  return best;
}

OracleResult plaintext_oracle(const SecProgram& p, const Model& m, const QuantTensor& input) {
  if (input.dims != p.input.dims) throw ValidationError("input shape " + Shape{input.dims}.str() +
                                                        " does not match the program input " +
                                                        p.input.str());
  if (input.bits != p.ring.bits) throw ValidationError("input bit-width differs from the program");
  input.validate();
  std::vector<std::uint64_t> x = input.data;
  OracleResult r;
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    if (p.layers[i].kind == LayerKind::kArgMax) {
      r.logits = x;
      r.label = signed_argmax(p.ring.ring(), x);
      return r;
    }
    x = oracle_layer(p, i, m, x);
  }
  throw ValidationError("program has no argmax layer");
}

std::uint64_t logit_error_bound(const SecProgram& p, const Model& m) {
  const Ring ring = p.ring.ring();
  std::uint64_t e = 0;
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    const Layer& L = p.layers[i];
    switch (L.kind) {
      case LayerKind::kConv:
      case LayerKind::kFc: {
        const QuantTensor& w = weight_of(m, i);
        const std::size_t rows = L.out_channels ? L.out_channels : L.out_features;
        const std::size_t cols = w.size() / rows;
        std::uint64_t l1 = 0;
        for (std::size_t r = 0; r < rows; ++r) {
          std::uint64_t s = 0;
          for (std::size_t c = 0; c < cols; ++c) {
            s += static_cast<std::uint64_t>(std::llabs(ring.signed_view(w.data[r * cols + c])));
          }
          l1 = std::max(l1, s);
        }
        e *= l1;
        break;
      }
      case LayerKind::kTrunc:
        e = ((e + (std::uint64_t{1} << L.shift) - 1) >> L.shift) + 1;
        break;
      case LayerKind::kAvgPool: {
        const std::uint64_t w = static_cast<std::uint64_t>(L.kernel_h) * L.kernel_w;
        if (w > 1) e += std::has_single_bit(w) ? 1 : 2;
        break;
      }
      case LayerKind::kRelu:
      case LayerKind::kMaxPool:
      case LayerKind::kArgMax:
        break;
    }
  }
  return e;
}

double logit_mape(const Ring& ring, std::span<const std::uint64_t> secure,
                  std::span<const std::uint64_t> oracle) {
  if (secure.size() != oracle.size()) throw DomainError("logit vectors differ in length");
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    const auto o = static_cast<double>(ring.signed_view(oracle[i]));
    if (o == 0) continue;
    sum += std::abs(static_cast<double>(ring.signed_view(secure[i])) - o) / std::abs(o);
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

std::uint64_t logit_max_deviation(const Ring& ring, std::span<const std::uint64_t> secure,
                                  std::span<const std::uint64_t> oracle) {
  if (secure.size() != oracle.size()) throw DomainError("logit vectors differ in length");
  std::uint64_t worst = 0;
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    const std::int64_t d = ring.signed_view(ring.sub(secure[i], oracle[i]));
    worst = std::max(worst, static_cast<std::uint64_t>(std::llabs(d)));
  }
  return worst;
}

}  // namespace seconnds
