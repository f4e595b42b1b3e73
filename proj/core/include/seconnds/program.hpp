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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seconnds/linconv.hpp"
#include "seconnds/nonlinear.hpp"
#include "seconnds/session.hpp"
#include "seconnds/tensor.hpp"

namespace seconnds {

enum class LayerKind : std::uint8_t { kConv, kFc, kRelu, kTrunc, kMaxPool, kAvgPool, kArgMax };

const char* layer_kind_name(LayerKind k);

/// Activation shape: [C, H, W] for feature maps, [n] after a fully connected layer.
struct Shape {
  std::vector<std::uint32_t> dims;

  std::size_t size() const;
  std::string str() const;
  bool operator==(const Shape&) const = default;
};

struct Layer {
  LayerKind kind = LayerKind::kRelu;
  // conv
  std::uint32_t out_channels = 0;
  std::uint32_t kernel_h = 0;
  std::uint32_t kernel_w = 0;
  std::uint32_t stride = 1;
  std::uint32_t pad = 0;
  // fc
  std::uint32_t out_features = 0;
  // conv and fc
  bool has_bias = false;
  // trunc
  unsigned shift = 0;
  TruncMode trunc_mode = TruncMode::kSigned;
  // pooling windows reuse kernel_h, kernel_w and stride

  Shape in;
  Shape out;
};

/// Ordered layer list with chained shapes and exactly one terminal argmax.
struct SecProgram {
  std::string name = "model";
  RingParams ring;
  MillVariant mill = MillVariant::kLinear;
  Shape input;
  std::vector<Layer> layers;

  /// Recomputes every layer's in/out shape; throws ValidationError naming the layer.
  void resolve_shapes();
  void validate() const;
  const Shape& output_shape() const;
};

/// Geometry of a resolved conv or fc layer.
ConvShape conv_shape_of(const Layer& L);
FcShape fc_shape_of(const Layer& L);

/// Flat input index of every pooling window element, window-major: window j
/// occupies [j * kh * kw, (j + 1) * kh * kw).
std::vector<std::uint32_t> pool_gather_index(const Layer& L);

/// Text format, one directive per line, '#' starts a comment:
///
///   seconnds-program 1
///   name tinynet
///   bits 37
///   scale 8
///   mill linear
///   input 1 10 10
///   layer conv
///     out_channels 4
///     kernel 3 3
///     stride 1
///     pad 0
///     bias true
///     shift 4           # optional: truncate the output by 4 bits
///     delay_shift true  # apply that shift after the next relu instead
///   end
///   layer relu
///   end
///   ...
///
/// Layer keys: conv {out_channels, kernel, stride, pad, bias, shift, delay_shift},
/// fc {out, bias, shift, delay_shift}, trunc {shift, mode: msb_known|general|signed},
/// maxpool / avgpool {window, stride}, relu, argmax.
SecProgram parse_program(const std::string& text);
SecProgram load_program(const std::filesystem::path& path);
std::string format_program(const SecProgram& p);

/// Weights and biases per layer index, as ring elements of the program's width.
struct Model {
  std::map<std::uint32_t, QuantTensor> weights;
  std::map<std::uint32_t, QuantTensor> biases;

  /// Throws ValidationError when a tensor is missing or mis-shaped for its layer.
  void check_against(const SecProgram& p) const;
  std::uint64_t hash() const;
};

/// "SCNM", u16 version, u32 tensor count, then per tensor: u32 layer index,
/// u8 role (0 weight, 1 bias) and an SCNT blob.
Bytes encode_model(const Model& m);
Model decode_model(std::span<const std::uint8_t> data);
void save_model(const std::filesystem::path& path, const Model& m);
Model load_model(const std::filesystem::path& path);

}  // namespace seconnds
