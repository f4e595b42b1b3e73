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

#include "seconnds/program.hpp"

#include <sodium.h>

#include <sstream>

#include "seconnds/errors.hpp"

namespace seconnds {

const char* layer_kind_name(LayerKind k) {
  switch (k) {
    case LayerKind::kConv: return "conv";
    case LayerKind::kFc: return "fc";
    case LayerKind::kRelu: return "relu";
    case LayerKind::kTrunc: return "trunc";
    case LayerKind::kMaxPool: return "maxpool";
    case LayerKind::kAvgPool: return "avgpool";
    case LayerKind::kArgMax: return "argmax";
  }
  return "?";
}

std::size_t Shape::size() const {
  if (dims.empty()) return 0;
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

std::string Shape::str() const {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(dims[i]);
  }
  return s;
}

namespace {

[[noreturn]] void layer_error(std::size_t i, const std::string& msg) {
  throw ValidationError("layer " + std::to_string(i) + ": " + msg);
}

const char* trunc_mode_name(TruncMode m) {
  switch (m) {
    case TruncMode::kMsbKnown: return "msb_known";
    case TruncMode::kGeneral: return "general";
    case TruncMode::kSigned: return "signed";
  }
  return "?";
}

}  // namespace

void SecProgram::resolve_shapes() {
  Shape cur = input;
  if (cur.size() == 0) throw ValidationError("program input shape is empty");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    Layer& L = layers[i];
    L.in = cur;
    switch (L.kind) {
      case LayerKind::kConv: {
        if (cur.dims.size() != 3) layer_error(i, "conv needs a [C, H, W] input");
        if (!L.out_channels || !L.kernel_h || !L.kernel_w || !L.stride) {
          layer_error(i, "conv needs out_channels, kernel and a positive stride");
        }
        const std::uint32_t hp = cur.dims[1] + 2 * L.pad, wp = cur.dims[2] + 2 * L.pad;
        if (L.kernel_h > hp || L.kernel_w > wp) layer_error(i, "kernel larger than input");
        cur = Shape{{L.out_channels, (hp - L.kernel_h) / L.stride + 1, (wp - L.kernel_w) / L.stride + 1}};
        break;
      }
      case LayerKind::kFc:
        if (!L.out_features) layer_error(i, "fc needs out > 0");
        cur = Shape{{L.out_features}};
        break;
      case LayerKind::kMaxPool:
      case LayerKind::kAvgPool: {
        if (cur.dims.size() != 3) layer_error(i, "pooling needs a [C, H, W] input");
        if (!L.kernel_h || !L.kernel_w || !L.stride) layer_error(i, "pooling needs a window and stride");
        if (L.kernel_h > cur.dims[1] || L.kernel_w > cur.dims[2]) layer_error(i, "window larger than input");
        cur = Shape{{cur.dims[0], (cur.dims[1] - L.kernel_h) / L.stride + 1,
                     (cur.dims[2] - L.kernel_w) / L.stride + 1}};
        break;
      }
      case LayerKind::kTrunc:
        if (L.shift == 0 || L.shift >= ring.bits) layer_error(i, "trunc shift out of range");
        break;
      case LayerKind::kRelu:
        break;
      case LayerKind::kArgMax:
        if (i + 1 != layers.size()) layer_error(i, "argmax must be the last layer");
        cur = Shape{{1}};
        break;
    }
    L.out = cur;
  }
}

void SecProgram::validate() const {
  ring.validate();
  if (layers.empty() || layers.back().kind != LayerKind::kArgMax) {
    throw ValidationError("program must end with exactly one argmax layer");
  }
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
    if (layers[i].kind == LayerKind::kArgMax) layer_error(i, "argmax must be the last layer");
  }
  SecProgram copy = *this;
  copy.resolve_shapes();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (!(copy.layers[i].in == layers[i].in) || !(copy.layers[i].out == layers[i].out)) {
      layer_error(i, "shape chain mismatch");
    }
  }
}

const Shape& SecProgram::output_shape() const {
  if (layers.empty()) return input;
  return layers.size() >= 2 ? layers[layers.size() - 2].out : input;
}

ConvShape conv_shape_of(const Layer& L) {
  if (L.kind != LayerKind::kConv || L.in.dims.size() != 3) throw StateError("not a resolved conv layer");
  ConvShape c;
  c.channels = L.in.dims[0];
  c.height = L.in.dims[1];
  c.width = L.in.dims[2];
  c.out_channels = L.out_channels;
  c.kernel_h = L.kernel_h;
  c.kernel_w = L.kernel_w;
  c.stride = L.stride;
  c.pad = L.pad;
  return c;
}

FcShape fc_shape_of(const Layer& L) {
  if (L.kind != LayerKind::kFc || L.in.size() == 0) throw StateError("not a resolved fc layer");
  return FcShape{L.out_features, static_cast<std::uint32_t>(L.in.size())};
}

std::vector<std::uint32_t> pool_gather_index(const Layer& L) {
  if ((L.kind != LayerKind::kMaxPool && L.kind != LayerKind::kAvgPool) || L.in.dims.size() != 3 ||
      L.out.dims.size() != 3) {
    throw StateError("not a resolved pooling layer");
  }
  const std::uint32_t C = L.in.dims[0], H = L.in.dims[1], W = L.in.dims[2];
  const std::uint32_t Ho = L.out.dims[1], Wo = L.out.dims[2];
  std::vector<std::uint32_t> idx;
  idx.reserve(static_cast<std::size_t>(C) * Ho * Wo * L.kernel_h * L.kernel_w);
  for (std::uint32_t c = 0; c < C; ++c) {
    for (std::uint32_t ho = 0; ho < Ho; ++ho) {
      for (std::uint32_t wo = 0; wo < Wo; ++wo) {
        for (std::uint32_t i = 0; i < L.kernel_h; ++i) {
          for (std::uint32_t j = 0; j < L.kernel_w; ++j) {
            idx.push_back((c * H + ho * L.stride + i) * W + wo * L.stride + j);
          }
        }
      }
    }
  }
  return idx;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line.substr(0, line.find('#')));
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

std::uint32_t to_u32(const std::string& s, std::size_t line) {
  try {
    std::size_t pos = 0;
    const unsigned long v = std::stoul(s, &pos);
    if (pos != s.size() || v > 0xffffffffUL) throw std::invalid_argument(s);
    return static_cast<std::uint32_t>(v);
  } catch (const std::exception&) {
    throw FormatError("line " + std::to_string(line) + ": expected an unsigned integer, got '" + s + "'");
  }
}

bool to_bool(const std::string& s, std::size_t line) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw FormatError("line " + std::to_string(line) + ": expected a boolean, got '" + s + "'");
}

LayerKind to_kind(const std::string& s, std::size_t line) {
  for (auto k : {LayerKind::kConv, LayerKind::kFc, LayerKind::kRelu, LayerKind::kTrunc,
                 LayerKind::kMaxPool, LayerKind::kAvgPool, LayerKind::kArgMax}) {
    if (s == layer_kind_name(k)) return k;
  }
  throw FormatError("line " + std::to_string(line) + ": unknown layer kind '" + s + "'");
}

struct PendingShift {
  unsigned shift = 0;
  bool delay = false;
};

}  // namespace

SecProgram parse_program(const std::string& text) {
  SecProgram p;
  std::istringstream is(text);
  std::string raw;
  std::size_t lineno = 0;
  bool header = false;
  bool have_input = false;
  std::optional<Layer> cur;
  PendingShift shift;
  bool stride_set = false;
  unsigned delayed = 0;  // shift waiting for the next relu

  auto need = [&](const std::vector<std::string>& t, std::size_t n) {
    if (t.size() != n + 1) {
      throw FormatError("line " + std::to_string(lineno) + ": '" + t[0] + "' takes " +
                        std::to_string(n) + " value(s)");
    }
  };

  while (std::getline(is, raw)) {
    ++lineno;
    const auto t = tokens(raw);
    if (t.empty()) continue;
    if (!header) {
      if (t.size() != 2 || t[0] != "seconnds-program") throw FormatError("missing 'seconnds-program' header");
      if (t[1] != "1") throw FormatError("unsupported program version " + t[1]);
      header = true;
      continue;
    }
    const std::string& key = t[0];
    if (!cur) {
      if (key == "name") {
        need(t, 1);
        p.name = t[1];
      } else if (key == "bits") {
        need(t, 1);
        p.ring.bits = to_u32(t[1], lineno);
      } else if (key == "scale") {
        need(t, 1);
        p.ring.scale = to_u32(t[1], lineno);
      } else if (key == "mill") {
        need(t, 1);
        p.mill = parse_mill_variant(t[1]);
      } else if (key == "input") {
        if (t.size() < 2 || t.size() > 4) throw FormatError("line " + std::to_string(lineno) + ": input takes 1 to 3 dims");
        for (std::size_t i = 1; i < t.size(); ++i) p.input.dims.push_back(to_u32(t[i], lineno));
        have_input = true;
      } else if (key == "layer") {
        need(t, 1);
        cur.emplace();
        cur->kind = to_kind(t[1], lineno);
        shift = {};
        stride_set = false;
      } else {
        throw FormatError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      }
      continue;
    }
    if (key == "end") {
      Layer done = *cur;
      if ((done.kind == LayerKind::kMaxPool || done.kind == LayerKind::kAvgPool) && !stride_set) {
        done.stride = done.kernel_h;
      }
      cur.reset();
      p.layers.push_back(done);
      if (done.kind == LayerKind::kRelu && delayed != 0) {
        Layer tr;
        tr.kind = LayerKind::kTrunc;
        tr.shift = delayed;
        tr.trunc_mode = TruncMode::kMsbKnown;
        p.layers.push_back(tr);
        delayed = 0;
      }
      if (shift.shift) {
        if (shift.delay) {
          delayed = shift.shift;
        } else {
          Layer tr;
          tr.kind = LayerKind::kTrunc;
          tr.shift = shift.shift;
          tr.trunc_mode = TruncMode::kSigned;
          p.layers.push_back(tr);
        }
      }
      continue;
    }
    Layer& L = *cur;
    if (key == "out_channels") {
      need(t, 1);
      L.out_channels = to_u32(t[1], lineno);
    } else if (key == "out") {
      need(t, 1);
      L.out_features = to_u32(t[1], lineno);
    } else if (key == "kernel" || key == "window") {
      need(t, 2);
      L.kernel_h = to_u32(t[1], lineno);
      L.kernel_w = to_u32(t[2], lineno);
    } else if (key == "stride") {
      need(t, 1);
      L.stride = to_u32(t[1], lineno);
      stride_set = true;
      if (L.stride == 0) throw FormatError("line " + std::to_string(lineno) + ": stride must be positive");
    } else if (key == "pad") {
      need(t, 1);
      L.pad = to_u32(t[1], lineno);
    } else if (key == "bias") {
      need(t, 1);
      L.has_bias = to_bool(t[1], lineno);
    } else if (key == "shift") {
      need(t, 1);
      if (L.kind == LayerKind::kTrunc) {
        L.shift = to_u32(t[1], lineno);
      } else {
        shift.shift = to_u32(t[1], lineno);
      }
    } else if (key == "delay_shift") {
      need(t, 1);
      shift.delay = to_bool(t[1], lineno);
    } else if (key == "mode") {
      need(t, 1);
      if (t[1] == "msb_known") L.trunc_mode = TruncMode::kMsbKnown;
      else if (t[1] == "general") L.trunc_mode = TruncMode::kGeneral;
      else if (t[1] == "signed") L.trunc_mode = TruncMode::kSigned;
      else throw FormatError("line " + std::to_string(lineno) + ": unknown trunc mode '" + t[1] + "'");
    } else {
      throw FormatError("line " + std::to_string(lineno) + ": unknown layer key '" + key + "'");
    }
  }
  if (!header) throw FormatError("empty program");
  if (cur) throw FormatError("layer block not closed with 'end'");
  if (delayed != 0) throw ValidationError("delay_shift set but no relu follows");
  if (!have_input) throw ValidationError("program has no input shape");
  p.ring.validate();
  p.resolve_shapes();
  p.validate();
  return p;
}

SecProgram load_program(const std::filesystem::path& path) {
  const Bytes data = read_file(path);
  return parse_program(std::string(data.begin(), data.end()));
}

std::string format_program(const SecProgram& p) {
  std::ostringstream os;
  os << "seconnds-program 1\n";
  os << "name " << p.name << "\n";
  os << "bits " << p.ring.bits << "\n";
  os << "scale " << p.ring.scale << "\n";
  os << "mill " << mill_variant_name(p.mill) << "\n";
  os << "input";
  for (auto d : p.input.dims) os << " " << d;
  os << "\n";
  for (const auto& L : p.layers) {
    os << "\nlayer " << layer_kind_name(L.kind) << "\n";
    switch (L.kind) {
      case LayerKind::kConv:
        os << "  out_channels " << L.out_channels << "\n";
        os << "  kernel " << L.kernel_h << " " << L.kernel_w << "\n";
        os << "  stride " << L.stride << "\n";
        os << "  pad " << L.pad << "\n";
        os << "  bias " << (L.has_bias ? "true" : "false") << "\n";
        break;
      case LayerKind::kFc:
        os << "  out " << L.out_features << "\n";
        os << "  bias " << (L.has_bias ? "true" : "false") << "\n";
        break;
      case LayerKind::kTrunc:
        os << "  shift " << L.shift << "\n";
        os << "  mode " << trunc_mode_name(L.trunc_mode) << "\n";
        break;
      case LayerKind::kMaxPool:
      case LayerKind::kAvgPool:
        os << "  window " << L.kernel_h << " " << L.kernel_w << "\n";
        os << "  stride " << L.stride << "\n";
        break;
      case LayerKind::kRelu:
      case LayerKind::kArgMax:
        break;
    }
    os << "end\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

void Model::check_against(const SecProgram& p) const {
  auto is_linear = [&](std::uint32_t i) {
    return i < p.layers.size() &&
           (p.layers[i].kind == LayerKind::kConv || p.layers[i].kind == LayerKind::kFc);
  };
  for (const auto* group : {&weights, &biases}) {
    for (const auto& [i, t] : *group) {
      if (!is_linear(i)) layer_error(i, "model holds a tensor for a layer without parameters");
    }
  }
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    const Layer& L = p.layers[i];
    if (L.kind != LayerKind::kConv && L.kind != LayerKind::kFc) continue;
    const auto idx = static_cast<std::uint32_t>(i);
    const auto w = weights.find(idx);
    if (w == weights.end()) layer_error(i, "model has no weights for this layer");
    std::vector<std::uint32_t> want;
    if (L.kind == LayerKind::kConv) {
      want = {L.out_channels, L.in.dims[0], L.kernel_h, L.kernel_w};
    } else {
      want = {L.out_features, static_cast<std::uint32_t>(L.in.size())};
    }
    if (w->second.dims != want) layer_error(i, "weight tensor has the wrong shape");
    if (w->second.bits != p.ring.bits) layer_error(i, "weight tensor bit-width differs from the program");
    w->second.validate();
    const auto b = biases.find(idx);
    if (L.has_bias) {
      const std::uint32_t n = L.kind == LayerKind::kConv ? L.out_channels : L.out_features;
      if (b == biases.end()) layer_error(i, "model has no bias for this layer");
      if (b->second.dims != std::vector<std::uint32_t>{n}) layer_error(i, "bias tensor has the wrong shape");
      if (b->second.bits != p.ring.bits) layer_error(i, "bias tensor bit-width differs from the program");
      b->second.validate();
    } else if (b != biases.end()) {
      layer_error(i, "bias present but the layer declares none");
    }
  }
}

Bytes encode_model(const Model& m) {
  ByteWriter w;
  w.tag("SCNM");
  w.u16(1);
  w.u32(static_cast<std::uint32_t>(m.weights.size() + m.biases.size()));
  for (const auto& [layer, t] : m.weights) {
    w.u32(layer);
    w.u8(0);
    write_tensor(w, t);
  }
  for (const auto& [layer, t] : m.biases) {
    w.u32(layer);
    w.u8(1);
    write_tensor(w, t);
  }
  return w.take();
}

Model decode_model(std::span<const std::uint8_t> data) {
  ByteReader r(data);
  r.expect_tag("SCNM");
  if (r.u16() != 1) throw FormatError("unsupported model version");
  const std::uint32_t count = r.u32();
  Model m;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t layer = r.u32();
    const std::uint8_t role = r.u8();
    if (role > 1) throw FormatError("bad tensor role in model file");
    auto& dst = role == 0 ? m.weights : m.biases;
    if (!dst.emplace(layer, read_tensor(r)).second) throw FormatError("duplicate tensor in model file");
  }
  if (!r.done()) throw FormatError("trailing bytes in model file");
  return m;
}

std::uint64_t Model::hash() const {
  const Bytes b = encode_model(*this);
  std::uint64_t h;
  crypto_generichash(reinterpret_cast<std::uint8_t*>(&h), sizeof(h), b.data(), b.size(), nullptr, 0);
  return h;
}

void save_model(const std::filesystem::path& path, const Model& m) { write_file(path, encode_model(m)); }

Model load_model(const std::filesystem::path& path) { return decode_model(read_file(path)); }

}  // namespace seconnds
