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

#include "seconnds/inference.hpp"

#include <bit>
#include <chrono>

#include "seconnds/compare.hpp"
#include "seconnds/errors.hpp"
#include "seconnds/nonlinear.hpp"

namespace seconnds {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::uint64_t window_of(const Layer& L) {
  return static_cast<std::uint64_t>(L.kernel_h) * L.kernel_w;
}

}  // namespace

LayerDemand layer_demand(const Layer& L, unsigned bits, MillVariant v) {
  const std::uint64_t n = L.out.size();
  switch (L.kind) {
    case LayerKind::kRelu: {
      const auto b = relu_budget(bits, v);
      return {n * b.ands, n * b.cots};
    }
    case LayerKind::kTrunc: {
      const auto b = trunc_budget(bits, L.trunc_mode, v);
      return {n * b.ands, n * b.cots};
    }
    case LayerKind::kMaxPool: {
      const auto b = relu_budget(bits, v);
      const std::uint64_t steps = n * (window_of(L) - 1);
      return {steps * b.ands, steps * b.cots};
    }
    case LayerKind::kAvgPool: {
      if (window_of(L) == 1) return {};
      const auto b = trunc_budget(bits, TruncMode::kGeneral, v);
      return {n * b.ands, n * b.cots};
    }
    case LayerKind::kArgMax: {
      const std::uint64_t pairs = L.in.size() - 1;
      const auto b = drelu_budget(bits, v);
      return {pairs * b.ands, pairs * 4};
    }
    case LayerKind::kConv:
    case LayerKind::kFc:
      return {};
  }
  return {};
}

CompiledProgram::CompiledProgram(SecProgram program, std::size_t he_degree)
    : program_(std::move(program)) {
  program_.resolve_shapes();
  program_.validate();
  ctx_ = std::make_shared<RlweContext>(RlweParams::make(program_.ring.bits, he_degree));
  for (std::size_t i = 0; i < program_.layers.size(); ++i) {
    const Layer& L = program_.layers[i];
    if (L.kind == LayerKind::kConv) {
      layouts_.emplace(i, plan_conv(conv_shape_of(L), he_degree).layout);
    } else if (L.kind == LayerKind::kFc) {
      layouts_.emplace(i, plan_fc(fc_shape_of(L), he_degree).layout);
    }
  }
}

const LinearLayout& CompiledProgram::layout(std::size_t i) const {
  const auto it = layouts_.find(i);
  if (it == layouts_.end()) throw StateError("layer " + std::to_string(i) + " is not linear");
  return it->second;
}

LayerDemand CompiledProgram::demand(std::size_t i, MillVariant v) const {
  return layer_demand(program_.layers.at(i), program_.ring.bits, v);
}

LayerDemand CompiledProgram::total_demand(MillVariant v) const {
  LayerDemand d;
  for (std::size_t i = 0; i < program_.layers.size(); ++i) d += demand(i, v);
  return d;
}

ServerModel prepare_server_model(const CompiledProgram& cp, Model model,
                                 const std::optional<std::filesystem::path>& cache) {
  model.check_against(cp.program());
  ServerModel sm;
  sm.model_hash = model.hash();
  std::vector<WeightCacheEntry> cached;
  if (cache && std::filesystem::exists(*cache)) cached = load_weight_cache(*cache, cp.he());
  bool dirty = false;
  const auto& layers = cp.program().layers;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].kind != LayerKind::kConv && layers[i].kind != LayerKind::kFc) continue;
    const auto idx = static_cast<std::uint32_t>(i);
    const LinearLayout& layout = cp.layout(i);
    const auto t0 = Clock::now();
    const WeightCacheEntry* hit = nullptr;
    for (const auto& e : cached) {
      if (e.model_hash == sm.model_hash && e.layer == idx &&
          e.weights.layout_hash == layout.hash() &&
          e.weights.params_hash == cp.he().params().hash()) {
        hit = &e;
      }
    }
    if (hit) {
      sm.weights.emplace(idx, hit->weights);
      ++sm.cache_hits;
    } else {
      sm.weights.emplace(idx, preprocess_weights(cp.he(), layout, model.weights.at(idx).data));
      cached.push_back({sm.model_hash, idx, sm.weights.at(idx)});
      dirty = true;
    }
    sm.preprocess_ms[idx] = ms_since(t0);
  }
  if (cache && dirty) save_weight_cache(*cache, cp.he(), cached);
  sm.model = std::move(model);
  return sm;
}

// ---------------------------------------------------------------------------

namespace {

PhaseStats meter_diff(const SessionMeter& before, const SessionMeter& after) {
  return PhaseStats::from_counters(after.total() - before.total());
}

void add_bias(const Ring& ring, std::vector<std::uint64_t>& y, const QuantTensor& bias,
              std::size_t per_channel) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = ring.add(y[i], bias.data[i / per_channel]);
}

std::vector<std::uint64_t> gather(std::span<const std::uint64_t> x,
                                  const std::vector<std::uint32_t>& idx) {
  std::vector<std::uint64_t> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = x[idx[i]];
  return out;
}

}  // namespace

InferenceResult execute_inference(Session& s, const CompiledProgram& cp, const ServerModel* model,
                                  const QuantTensor* input) {
  const SecProgram& p = cp.program();
  const Ring ring = p.ring.ring();
  if (s.config().ring.bits != p.ring.bits) {
    throw ConfigError("session ring width differs from the program");
  }
  if (s.is_server() && (!model || input)) throw StateError("the server runs with a model only");
  if (!s.is_server() && (model || !input)) throw StateError("the client runs with an input only");
  if (input) {
    if (input->dims != p.input.dims) {
      throw ValidationError("input shape " + Shape{input->dims}.str() +
                            " does not match the program input " + p.input.str());
    }
    if (input->bits != p.ring.bits) throw ValidationError("input bit-width differs from the program");
    input->validate();
  }

  const MillVariant variant = s.mill_variant();
  InferenceResult res;
  RunReport& rep = res.report;
  rep.program = p.name;
  rep.party = s.is_server() ? "server" : "client";
  rep.mill = mill_variant_name(variant);
  rep.backend = triple_backend_name(s.config().backend);

  Channel& ch = s.channel();
  const SessionMeter start = ch.meter_snapshot();

  // Setup: base OTs, HE keys and correlated randomness for the whole program.
  HeSession he(cp.he());
  {
    const auto t0 = Clock::now();
    if (!s.ready()) s.setup();
    he.setup(s);
    const LayerDemand total = cp.total_demand(variant);
    s.prefill_triples(total.triples);
    s.prefill_cots(total.cots);
    rep.setup = meter_diff(start, ch.meter_snapshot());
    rep.setup.offline_ms = ms_since(t0);
  }

  std::vector<std::uint64_t> x;
  if (input) {
    x = input->data;
  } else {
    x.assign(p.input.size(), 0);
  }

  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    const Layer& L = p.layers[i];
    const auto idx = static_cast<std::uint32_t>(i);
    const SessionMeter before = ch.meter_snapshot();
    const std::uint64_t chunks_before = s.triples().chunks_generated();
    const auto t0 = Clock::now();
    switch (L.kind) {
      case LayerKind::kConv:
      case LayerKind::kFc: {
        const PreprocessedWeights* w = model ? &model->weights.at(idx) : nullptr;
        const Tag tag = L.kind == LayerKind::kConv ? Tag::kConv : Tag::kFc;
        x = linear_secure(s, he, tag, cp.layout(i), x, w, &res.linear);
        if (model && L.has_bias) {
          const std::size_t per = L.kind == LayerKind::kConv
                                      ? static_cast<std::size_t>(L.out.dims[1]) * L.out.dims[2]
                                      : 1;
          add_bias(ring, x, model->model.biases.at(idx), per);
        }
        break;
      }
      case LayerKind::kRelu:
        x = relu(s, Tag::kRelu, ring, x);
        break;
      case LayerKind::kTrunc:
        x = reshare(s, Tag::kTrunc, ring, x);
        x = truncate(s, Tag::kTrunc, ring, x, L.shift, L.trunc_mode);
        break;
      case LayerKind::kMaxPool:
        x = maxpool(s, Tag::kMaxPool, ring, gather(x, pool_gather_index(L)), window_of(L));
        break;
      case LayerKind::kAvgPool: {
        auto g = gather(x, pool_gather_index(L));
        g = reshare(s, Tag::kAvgPool, ring, g);
        x = avgpool(s, Tag::kAvgPool, ring, g, window_of(L));
        break;
      }
      case LayerKind::kArgMax:
        res.logit_share = x;
        res.label = argmax(s, Tag::kArgMax, ring, x);
        break;
    }
    LayerRecord rec;
    rec.index = idx;
    rec.kind = layer_kind_name(L.kind);
    rec.in_shape = L.in.str();
    rec.out_shape = L.out.str();
    rec.stats = meter_diff(before, ch.meter_snapshot());
    rec.stats.online_ms = ms_since(t0);
    if (model && model->preprocess_ms.count(idx)) rec.stats.offline_ms = model->preprocess_ms.at(idx);
    const LayerDemand d = cp.demand(i, variant);
    rec.triple_demand = d.triples;
    rec.cot_demand = d.cots;
    rec.online_refills = s.triples().chunks_generated() - chunks_before;
    if (rec.online_refills) {
      rep.warnings.push_back("layer " + std::to_string(i) + " refilled " +
                             std::to_string(rec.online_refills) + " triple chunk(s) online");
    }
    rep.layers.push_back(std::move(rec));
  }

  const SessionMeter end = ch.meter_snapshot();
  for (std::size_t t = 0; t < kNumTags; ++t) {
    const Tag tag = static_cast<Tag>(t);
    const TagCounters c = end.at(tag) - start.at(tag);
    if (!(c == TagCounters{})) rep.tags.push_back({tag_name(tag), PhaseStats::from_counters(c)});
  }
  rep.label = res.label;
  rep.finalize();
  return res;
}

// ---------------------------------------------------------------------------

Fixture make_tinynet(std::uint64_t seed) {
  Fixture f;
  f.program = parse_program(
      "seconnds-program 1\n"
      "name tinynet\n"
      "bits 37\n"
      "scale 8\n"
      "mill linear\n"
      "input 1 10 10\n"
      "layer conv\n  out_channels 4\n  kernel 3 3\n  bias true\nend\n"
      "layer relu\nend\n"
      "layer trunc\n  shift 4\n  mode msb_known\nend\n"
      "layer maxpool\n  window 2 2\nend\n"
      "layer fc\n  out 10\n  bias true\nend\n"
      "layer argmax\nend\n");
  const Ring ring = f.program.ring.ring();
  Prg prg(Block{seed, 0x74696e796e6574ULL}, 0);
  auto uniform_signed = [&](unsigned bits) {
    const auto v = static_cast<std::int64_t>(prg.next_bits(bits + 1)) - (std::int64_t{1} << bits);
    return ring.from_signed(v);
  };
  for (std::size_t i = 0; i < f.program.layers.size(); ++i) {
    const Layer& L = f.program.layers[i];
    if (L.kind != LayerKind::kConv && L.kind != LayerKind::kFc) continue;
    std::vector<std::uint32_t> dims;
    std::uint32_t outs;
    if (L.kind == LayerKind::kConv) {
      dims = {L.out_channels, L.in.dims[0], L.kernel_h, L.kernel_w};
      outs = L.out_channels;
    } else {
      dims = {L.out_features, static_cast<std::uint32_t>(L.in.size())};
      outs = L.out_features;
    }
    QuantTensor w(dims, ring.bits(), f.program.ring.scale);
    for (auto& v : w.data) v = uniform_signed(7);
    QuantTensor b({outs}, ring.bits(), f.program.ring.scale);
    for (auto& v : b.data) v = uniform_signed(L.kind == LayerKind::kConv ? 15 : 20);
    f.model.weights.emplace(static_cast<std::uint32_t>(i), std::move(w));
    f.model.biases.emplace(static_cast<std::uint32_t>(i), std::move(b));
  }
  return f;
}

QuantTensor random_input(const SecProgram& p, std::uint64_t seed, unsigned magnitude_bits) {
  const Ring ring = p.ring.ring();
  Prg prg(Block{seed, 0x696e707574ULL}, 0);
  QuantTensor t(p.input.dims, ring.bits(), p.ring.scale);
  for (auto& v : t.data) {
    v = ring.from_signed(static_cast<std::int64_t>(prg.next_bits(magnitude_bits + 1)) -
                         (std::int64_t{1} << magnitude_bits));
  }
  return t;
}

}  // namespace seconnds
