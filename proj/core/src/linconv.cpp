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

#include "seconnds/linconv.hpp"

#include <sodium.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "seconnds/errors.hpp"

namespace seconnds {

void ConvShape::validate() const {
  if (!channels || !height || !width || !out_channels || !kernel_h || !kernel_w) {
    throw DomainError("conv: zero-sized dimension");
  }
  if (stride == 0) throw DomainError("conv: stride must be at least 1");
  if (kernel_h > padded_h() || kernel_w > padded_w()) throw DomainError("conv: kernel larger than input");
}

std::uint64_t LinearLayout::hash() const {
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, 8);
  auto put = [&](std::uint64_t v) {
    crypto_generichash_update(&st, reinterpret_cast<const std::uint8_t*>(&v), sizeof(v));
  };
  auto put_list = [&](const std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>& l) {
    put(l.size());
    for (const auto& v : l) {
      put(v.size());
      for (auto [a, b] : v) put((static_cast<std::uint64_t>(a) << 32) | b);
    }
  };
  put(n);
  put(input_size);
  put(weight_size);
  put(output_size);
  put_list(inputs);
  put_list(weights);
  put_list(terms);
  put_list(outputs);
  std::uint64_t h;
  crypto_generichash_final(&st, reinterpret_cast<std::uint8_t*>(&h), sizeof(h));
  return h;
}

ConvPlan plan_conv(const ConvShape& shape, std::size_t n) {
  shape.validate();
  const std::uint32_t C = shape.channels, O = shape.out_channels;
  const std::uint32_t kh = shape.kernel_h, kw = shape.kernel_w;
  const std::uint32_t Hp = shape.padded_h(), Wp = shape.padded_w();
  if (static_cast<std::size_t>(kh) * Wp > n) {
    throw DomainError("conv: one output row needs more coefficients than the ring degree");
  }
  ConvPlan plan;
  plan.shape = shape;
  const std::size_t plane = static_cast<std::size_t>(Hp) * Wp;
  if (C * plane <= n) {
    plan.group_channels = C;
    plan.tile_rows = Hp;
  } else if (plane <= n) {
    plan.group_channels = static_cast<std::uint32_t>(n / plane);
    plan.tile_rows = Hp;
  } else {
    plan.group_channels = 1;
    plan.tile_rows = static_cast<std::uint32_t>(n / Wp);
  }
  const std::uint32_t Cg = plan.group_channels;
  const std::uint32_t rows_out_per_tile = plan.tile_rows - kh + 1;
  const std::uint32_t Ho1 = Hp - kh + 1;
  const std::uint32_t Ho = shape.out_h(), Wo = shape.out_w();
  plan.groups = (C + Cg - 1) / Cg;
  plan.row_tiles = (Ho1 + rows_out_per_tile - 1) / rows_out_per_tile;

  LinearLayout& L = plan.layout;
  L.n = n;
  L.input_size = static_cast<std::size_t>(C) * shape.height * shape.width;
  L.weight_size = static_cast<std::size_t>(O) * C * kh * kw;
  L.output_size = static_cast<std::size_t>(O) * Ho * Wo;
  const std::size_t G = plan.groups;
  L.inputs.resize(plan.row_tiles * G);
  L.weights.resize(plan.row_tiles * G * O);
  L.terms.resize(plan.row_tiles * O);
  L.outputs.resize(plan.row_tiles * O);

  for (std::size_t rt = 0; rt < plan.row_tiles; ++rt) {
    const std::uint32_t out_row0 = static_cast<std::uint32_t>(rt) * rows_out_per_tile;
    const std::uint32_t orows = std::min(rows_out_per_tile, Ho1 - out_row0);
    const std::uint32_t in_rows = orows + kh - 1;
    const std::size_t slab = static_cast<std::size_t>(in_rows) * Wp;
    const std::size_t offset = (Cg - 1) * slab + (kh - 1) * Wp + (kw - 1);
    for (std::size_t g = 0; g < G; ++g) {
      const std::uint32_t c0 = static_cast<std::uint32_t>(g) * Cg;
      const std::uint32_t cn = std::min(Cg, C - c0);
      auto& in = L.inputs[rt * G + g];
      for (std::uint32_t cl = 0; cl < cn; ++cl) {
        for (std::uint32_t h = 0; h < in_rows; ++h) {
          const std::int64_t ih = static_cast<std::int64_t>(out_row0 + h) - shape.pad;
          if (ih < 0 || ih >= shape.height) continue;
          for (std::uint32_t w = 0; w < Wp; ++w) {
            const std::int64_t iw = static_cast<std::int64_t>(w) - shape.pad;
            if (iw < 0 || iw >= shape.width) continue;
            const std::size_t flat = (static_cast<std::size_t>(c0 + cl) * shape.height + ih) * shape.width + iw;
            in.emplace_back(static_cast<std::uint32_t>(flat),
                            static_cast<std::uint32_t>(cl * slab + h * Wp + w));
          }
        }
      }
      for (std::uint32_t o = 0; o < O; ++o) {
        auto& wl = L.weights[(rt * G + g) * O + o];
        for (std::uint32_t cl = 0; cl < cn; ++cl) {
          for (std::uint32_t i = 0; i < kh; ++i) {
            for (std::uint32_t j = 0; j < kw; ++j) {
              const std::size_t flat = ((static_cast<std::size_t>(o) * C + c0 + cl) * kh + i) * kw + j;
              wl.emplace_back(static_cast<std::uint32_t>(flat),
                              static_cast<std::uint32_t>(offset - (cl * slab + i * Wp + j)));
            }
          }
        }
      }
    }
    for (std::uint32_t o = 0; o < O; ++o) {
      auto& terms = L.terms[rt * O + o];
      for (std::size_t g = 0; g < G; ++g) {
        terms.emplace_back(static_cast<std::uint32_t>(rt * G + g),
                           static_cast<std::uint32_t>((rt * G + g) * O + o));
      }
      auto& outs = L.outputs[rt * O + o];
      for (std::uint32_t hl = 0; hl < orows; ++hl) {
        const std::uint32_t h1 = out_row0 + hl;
        if (h1 % shape.stride) continue;
        const std::uint32_t ho = h1 / shape.stride;
        if (ho >= Ho) continue;
        for (std::uint32_t w1 = 0; w1 + kw <= Wp; w1 += shape.stride) {
          const std::uint32_t wo = w1 / shape.stride;
          if (wo >= Wo) continue;
          const std::size_t flat = (static_cast<std::size_t>(o) * Ho + ho) * Wo + wo;
          outs.emplace_back(static_cast<std::uint32_t>(flat),
                            static_cast<std::uint32_t>(offset + hl * Wp + w1));
        }
      }
    }
  }
  return plan;
}

FcPlan plan_fc(const FcShape& shape, std::size_t n) {
  if (shape.rows == 0 || shape.cols == 0) throw DomainError("fc: zero-sized dimension");
  FcPlan plan;
  plan.shape = shape;
  const std::uint32_t R = shape.rows, K = shape.cols;
  const auto Kc = static_cast<std::uint32_t>(std::min<std::size_t>(K, n));
  const auto Rg = static_cast<std::uint32_t>(n / Kc);
  plan.col_chunk = Kc;
  plan.rows_per_poly = Rg;
  const std::size_t CC = (K + Kc - 1) / Kc;
  const std::size_t RG = (R + Rg - 1) / Rg;

  LinearLayout& L = plan.layout;
  L.n = n;
  L.input_size = K;
  L.weight_size = static_cast<std::size_t>(R) * K;
  L.output_size = R;
  L.inputs.resize(CC);
  L.weights.resize(RG * CC);
  L.terms.resize(RG);
  L.outputs.resize(RG);
  for (std::size_t cc = 0; cc < CC; ++cc) {
    for (std::uint32_t jl = 0; jl < Kc && cc * Kc + jl < K; ++jl) {
      L.inputs[cc].emplace_back(static_cast<std::uint32_t>(cc * Kc + jl), jl);
    }
  }
  for (std::size_t rg = 0; rg < RG; ++rg) {
    for (std::size_t cc = 0; cc < CC; ++cc) {
      auto& wl = L.weights[rg * CC + cc];
      for (std::uint32_t rl = 0; rl < Rg && rg * Rg + rl < R; ++rl) {
        const std::size_t r = rg * Rg + rl;
        for (std::uint32_t jl = 0; jl < Kc && cc * Kc + jl < K; ++jl) {
          wl.emplace_back(static_cast<std::uint32_t>(r * K + cc * Kc + jl), rl * Kc + Kc - 1 - jl);
        }
      }
      L.terms[rg].emplace_back(static_cast<std::uint32_t>(cc),
                               static_cast<std::uint32_t>(rg * CC + cc));
    }
    for (std::uint32_t rl = 0; rl < Rg && rg * Rg + rl < R; ++rl) {
      L.outputs[rg].emplace_back(static_cast<std::uint32_t>(rg * Rg + rl), rl * Kc + Kc - 1);
    }
  }
  return plan;
}

PreprocessedWeights preprocess_weights(const RlweContext& ctx, const LinearLayout& layout,
                                       std::span<const std::uint64_t> weights) {
  if (weights.size() != layout.weight_size) throw DomainError("weights do not match the layout");
  if (layout.n != ctx.n()) throw DomainError("layout was planned for another ring degree");
  const Ring ring(ctx.plain_bits());
  PreprocessedWeights out;
  out.layout_hash = layout.hash();
  out.params_hash = ctx.params().hash();
  std::vector<double> l1(layout.weights.size(), 0.0);
  for (std::size_t p = 0; p < layout.weights.size(); ++p) {
    std::vector<std::int64_t> coeffs(ctx.n(), 0);
    for (auto [idx, coeff] : layout.weights[p]) {
      if (!ring.contains(weights[idx])) throw DomainError("weight exceeds the plaintext width");
      const std::int64_t v = ring.signed_view(weights[idx]);
      coeffs[coeff] = v;
      l1[p] += std::abs(static_cast<double>(v));
    }
    Poly poly = ctx.encode_signed(coeffs);
    ctx.to_ntt(poly, NttUse::kWeight);
    out.polys.push_back(std::move(poly));
  }
  for (const auto& terms : layout.terms) {
    double s = 0;
    for (auto [in, w] : terms) s += l1[w];
    out.max_l1 = std::max(out.max_l1, s);
  }
  ctx.check_linear_budget(out.max_l1);
  return out;
}

void HeSession::setup(Session& s) {
  if (s.is_server()) {
    auto pk = ctx_->deserialize_public_key(s.channel().recv_frame(Tag::kHeSetup));
    ctx_->ct_to_ntt(pk.ct);
    pk_ = std::move(pk);
  } else {
    sk_ = ctx_->keygen(s.prg(Stream::kHe));
    const auto pk = ctx_->make_public_key(*sk_, s.prg(Stream::kHe));
    s.channel().send_frame(Tag::kHeSetup, ctx_->serialize(pk), PayloadClass::kCiphertext);
  }
}

namespace {

Bytes pack_cts(const std::vector<Bytes>& cts) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(cts.size()));
  for (const auto& c : cts) {
    w.u32(static_cast<std::uint32_t>(c.size()));
    w.raw(c);
  }
  return w.take();
}

std::vector<Ciphertext> unpack_cts(const RlweContext& ctx, std::span<const std::uint8_t> frame,
                                   std::size_t expected) {
  ByteReader r(frame);
  const std::uint32_t count = r.u32();
  if (count != expected) throw ProtocolDesync("unexpected ciphertext count");
  std::vector<Ciphertext> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t len = r.u32();
    out.push_back(ctx.deserialize(r.raw(len)));
  }
  if (!r.done()) throw FormatError("trailing bytes after ciphertexts");
  return out;
}

std::vector<std::uint64_t> gather(const RlweContext& ctx,
                                  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& map,
                                  std::span<const std::uint64_t> x) {
  std::vector<std::uint64_t> plain(ctx.n(), 0);
  for (auto [idx, coeff] : map) plain[coeff] = x[idx] & ctx.plain_mask();
  return plain;
}

}  // namespace

std::vector<std::uint64_t> linear_secure(Session& s, HeSession& he, Tag tag,
                                         const LinearLayout& layout,
                                         std::span<const std::uint64_t> x,
                                         const PreprocessedWeights* weights, LinearStats* stats) {
  if (!he.ready()) throw StateError("HE keys not set up");
  const RlweContext& ctx = he.context();
  if (layout.n != ctx.n()) throw DomainError("layout was planned for another ring degree");
  if (x.size() != layout.input_size) throw DomainError("linear layer input has the wrong size");
  const std::uint64_t weight_ntts_before = ctx.forward_ntt_count(NttUse::kWeight);
  std::vector<std::uint64_t> out(layout.output_size, 0);
  Channel& ch = s.channel();
  Prg& prg = s.prg(Stream::kHe);

  if (!s.is_server()) {
    std::vector<Bytes> cts;
    cts.reserve(layout.inputs.size());
    for (const auto& map : layout.inputs) {
      const auto ct = ctx.encrypt(he.secret_key(), gather(ctx, map, x), prg,
                                  s.config().he_seed_compress);
      cts.push_back(ctx.serialize(ct));
    }
    ch.send_frame(tag, pack_cts(cts), PayloadClass::kCiphertext);
    const auto results = unpack_cts(ctx, ch.recv_frame(tag), layout.outputs.size());
    for (std::size_t o = 0; o < results.size(); ++o) {
      std::vector<std::size_t> pos;
      pos.reserve(layout.outputs[o].size());
      for (auto [idx, coeff] : layout.outputs[o]) pos.push_back(coeff);
      const auto vals = ctx.decrypt_at(results[o], he.secret_key(), pos);
      for (std::size_t i = 0; i < vals.size(); ++i) out[layout.outputs[o][i].first] = vals[i];
    }
  } else {
    if (!weights) throw StateError("server needs preprocessed weights");
    if (weights->layout_hash != layout.hash() || weights->params_hash != ctx.params().hash() ||
        weights->polys.size() != layout.weights.size()) {
      throw StateError("preprocessed weights belong to another layout or parameter set");
    }
    auto inputs = unpack_cts(ctx, ch.recv_frame(tag), layout.inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      ctx.ct_to_ntt(inputs[i]);
      Poly own = ctx.encode_scaled(gather(ctx, layout.inputs[i], x));
      ctx.to_ntt(own);
      ctx.add_plain_inplace(inputs[i], own);
    }
    std::vector<Bytes> cts;
    cts.reserve(layout.outputs.size());
    const Ring ring(ctx.plain_bits());
    for (std::size_t o = 0; o < layout.outputs.size(); ++o) {
      Ciphertext acc = ctx.encrypt_zero(he.public_key(), prg);
      for (auto [in, w] : layout.terms[o]) ctx.mul_plain_acc(acc, inputs[in], weights->polys[w]);
      ctx.ct_to_coeff(acc);
      std::vector<std::uint64_t> r(ctx.n());
      for (auto& v : r) v = ring.random(prg);
      ctx.mask_inplace(acc, r);
      ctx.flood_inplace(acc, prg);
      cts.push_back(ctx.serialize(acc));
      for (auto [idx, coeff] : layout.outputs[o]) out[idx] = ring.neg(r[coeff]);
    }
    ch.send_frame(tag, pack_cts(cts), PayloadClass::kCiphertext);
  }
  if (stats) {
    stats->input_cts += layout.inputs.size();
    stats->output_cts += layout.outputs.size();
    stats->online_weight_ntts += ctx.forward_ntt_count(NttUse::kWeight) - weight_ntts_before;
  }
  return out;
}

std::vector<std::uint64_t> conv2d_secure(Session& s, HeSession& he, const ConvPlan& plan,
                                         std::span<const std::uint64_t> x,
                                         const PreprocessedWeights* weights, LinearStats* stats) {
  return linear_secure(s, he, Tag::kConv, plan.layout, x, weights, stats);
}

std::vector<std::uint64_t> fc_secure(Session& s, HeSession& he, const FcPlan& plan,
                                     std::span<const std::uint64_t> x,
                                     const PreprocessedWeights* weights, LinearStats* stats) {
  return linear_secure(s, he, Tag::kFc, plan.layout, x, weights, stats);
}

std::vector<std::uint64_t> conv2d_reference(const Ring& ring, const ConvShape& shape,
                                            std::span<const std::uint64_t> x,
                                            std::span<const std::uint64_t> kernel) {
  shape.validate();
  const std::uint32_t C = shape.channels, H = shape.height, W = shape.width;
  const std::uint32_t Ho = shape.out_h(), Wo = shape.out_w();
  if (x.size() != static_cast<std::size_t>(C) * H * W) throw DomainError("conv input size");
  if (kernel.size() != static_cast<std::size_t>(shape.out_channels) * C * shape.kernel_h * shape.kernel_w) {
    throw DomainError("conv kernel size");
  }
  std::vector<std::uint64_t> y(static_cast<std::size_t>(shape.out_channels) * Ho * Wo, 0);
  for (std::uint32_t o = 0; o < shape.out_channels; ++o) {
    for (std::uint32_t ho = 0; ho < Ho; ++ho) {
      for (std::uint32_t wo = 0; wo < Wo; ++wo) {
        std::uint64_t acc = 0;
        for (std::uint32_t c = 0; c < C; ++c) {
          for (std::uint32_t i = 0; i < shape.kernel_h; ++i) {
            const std::int64_t ih = static_cast<std::int64_t>(ho) * shape.stride + i - shape.pad;
            if (ih < 0 || ih >= H) continue;
            for (std::uint32_t j = 0; j < shape.kernel_w; ++j) {
              const std::int64_t iw = static_cast<std::int64_t>(wo) * shape.stride + j - shape.pad;
              if (iw < 0 || iw >= W) continue;
              const std::uint64_t xv = x[(static_cast<std::size_t>(c) * H + ih) * W + iw];
              const std::uint64_t kv =
                  kernel[((static_cast<std::size_t>(o) * C + c) * shape.kernel_h + i) * shape.kernel_w + j];
              acc += xv * kv;
            }
          }
        }
        y[(static_cast<std::size_t>(o) * Ho + ho) * Wo + wo] = ring.reduce(acc);
      }
    }
  }
  return y;
}

std::vector<std::uint64_t> matvec_reference(const Ring& ring, const FcShape& shape,
                                            std::span<const std::uint64_t> w,
                                            std::span<const std::uint64_t> x) {
  if (w.size() != static_cast<std::size_t>(shape.rows) * shape.cols || x.size() != shape.cols) {
    throw DomainError("matvec operand sizes");
  }
  std::vector<std::uint64_t> y(shape.rows);
  for (std::uint32_t r = 0; r < shape.rows; ++r) {
    std::uint64_t acc = 0;
    for (std::uint32_t j = 0; j < shape.cols; ++j) acc += w[static_cast<std::size_t>(r) * shape.cols + j] * x[j];
    y[r] = ring.reduce(acc);
  }
  return y;
}

// ---------------------------------------------------------------------------

void save_weight_cache(const std::filesystem::path& path, const RlweContext& ctx,
                       std::span<const WeightCacheEntry> entries) {
  ByteWriter w;
  w.tag("SCWC");
  w.u16(1);
  w.u64(ctx.params().hash());
  w.u32(static_cast<std::uint32_t>(entries.size()));
  for (const auto& e : entries) {
    if (e.weights.params_hash != ctx.params().hash()) {
      throw StateError("weight cache entry built for another parameter set");
    }
    w.u64(e.model_hash);
    w.u32(e.layer);
    w.u64(e.weights.layout_hash);
    w.u64(std::bit_cast<std::uint64_t>(e.weights.max_l1));
    w.u32(static_cast<std::uint32_t>(e.weights.polys.size()));
    for (const auto& p : e.weights.polys) w.u64s(p.data);
  }
  write_file(path, w.bytes());
}

std::vector<WeightCacheEntry> load_weight_cache(const std::filesystem::path& path,
                                                const RlweContext& ctx) {
  const Bytes data = read_file(path);
  ByteReader r(data);
  r.expect_tag("SCWC");
  if (r.u16() != 1) throw FormatError("unsupported weight cache version");
  const std::uint64_t params_hash = r.u64();
  if (params_hash != ctx.params().hash()) throw FormatError("weight cache built for other RLWE parameters");
  const std::uint32_t count = r.u32();
  std::vector<WeightCacheEntry> out;
  for (std::uint32_t i = 0; i < count; ++i) {
    WeightCacheEntry e;
    e.model_hash = r.u64();
    e.layer = r.u32();
    e.weights.layout_hash = r.u64();
    e.weights.params_hash = params_hash;
    e.weights.max_l1 = std::bit_cast<double>(r.u64());
    const std::uint32_t np = r.u32();
    for (std::uint32_t p = 0; p < np; ++p) {
      Poly poly = ctx.zero(Domain::kNtt);
      r.u64s(poly.data);
      e.weights.polys.push_back(std::move(poly));
    }
    out.push_back(std::move(e));
  }
  if (!r.done()) throw FormatError("trailing bytes in weight cache");
  return out;
}

}  // namespace seconnds
