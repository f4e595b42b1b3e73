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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "seconnds/lattice.hpp"
#include "seconnds/rings.hpp"
#include "seconnds/session.hpp"
#include "seconnds/tensor.hpp"

namespace seconnds {

struct ConvShape {
  std::uint32_t channels = 1;
  std::uint32_t height = 1;
  std::uint32_t width = 1;
  std::uint32_t out_channels = 1;
  std::uint32_t kernel_h = 1;
  std::uint32_t kernel_w = 1;
  std::uint32_t stride = 1;
  std::uint32_t pad = 0;

  std::uint32_t padded_h() const { return height + 2 * pad; }
  std::uint32_t padded_w() const { return width + 2 * pad; }
  std::uint32_t out_h() const { return (padded_h() - kernel_h) / stride + 1; }
  std::uint32_t out_w() const { return (padded_w() - kernel_w) / stride + 1; }
  void validate() const;
};

struct FcShape {
  std::uint32_t rows = 1;  // outputs
  std::uint32_t cols = 1;  // inputs
};

/// Coefficient placement shared by both parties. Every output ciphertext is a
/// sum of input ciphertexts times weight polynomials; the designated
/// coefficients of each output hold finished dot products.
struct LinearLayout {
  std::size_t n = 0;
  /// Per input polynomial: (flat input index, coefficient).
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> inputs;
  /// Per weight polynomial: (flat weight index, coefficient).
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> weights;
  /// Per output polynomial: (input polynomial, weight polynomial) products to add.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> terms;
  /// Per output polynomial: (flat output index, coefficient).
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> outputs;
  std::size_t input_size = 0;
  std::size_t weight_size = 0;
  std::size_t output_size = 0;

  /// Fingerprint of the placement, part of the weight cache key.
  std::uint64_t hash() const;
};

struct ConvPlan {
  ConvShape shape;
  std::uint32_t group_channels = 0;  // channels per input polynomial
  std::uint32_t tile_rows = 0;       // padded input rows per input polynomial
  std::size_t groups = 0;
  std::size_t row_tiles = 0;
  LinearLayout layout;
};

struct FcPlan {
  FcShape shape;
  std::uint32_t col_chunk = 0;
  std::uint32_t rows_per_poly = 0;
  LinearLayout layout;
};

/// Throws DomainError when one kernel window row band cannot fit in n coefficients.
ConvPlan plan_conv(const ConvShape& shape, std::size_t n);
FcPlan plan_fc(const FcShape& shape, std::size_t n);

/// Server-side weight polynomials, NTT form.
struct PreprocessedWeights {
  std::uint64_t layout_hash = 0;
  std::uint64_t params_hash = 0;
  std::vector<Poly> polys;
  double max_l1 = 0;  // largest l1 norm of weights feeding one output coefficient

  bool operator==(const PreprocessedWeights&) const = default;
};

/// Kernel values are ring elements of the context's plaintext width, read as
/// two's-complement integers.
PreprocessedWeights preprocess_weights(const RlweContext& ctx, const LinearLayout& layout,
                                       std::span<const std::uint64_t> weights);

/// One party's long-lived HE state: the client's secret key, or the server's
/// copy of the client's public key.
class HeSession {
 public:
  explicit HeSession(const RlweContext& ctx) : ctx_(&ctx) {}

  /// Client generates keys and sends the public key; server receives it.
  void setup(Session& s);
  bool ready() const { return sk_.has_value() || pk_.has_value(); }

  const RlweContext& context() const { return *ctx_; }
  const SecretKey& secret_key() const { return *sk_; }
  const PublicKey& public_key() const { return *pk_; }

 private:
  const RlweContext* ctx_;
  std::optional<SecretKey> sk_;
  std::optional<PublicKey> pk_;
};

struct LinearStats {
  std::size_t input_cts = 0;
  std::size_t output_cts = 0;
  std::uint64_t online_weight_ntts = 0;
};

/// Both parties call with their shares; the server also passes the weights.
/// Returns this party's shares of the exact result mod 2^b.
std::vector<std::uint64_t> linear_secure(Session& s, HeSession& he, Tag tag,
                                         const LinearLayout& layout,
                                         std::span<const std::uint64_t> x,
                                         const PreprocessedWeights* weights,
                                         LinearStats* stats = nullptr);

/// Shares of a [C, H, W] input to shares of the [O, Ho, Wo] convolution.
std::vector<std::uint64_t> conv2d_secure(Session& s, HeSession& he, const ConvPlan& plan,
                                         std::span<const std::uint64_t> x,
                                         const PreprocessedWeights* weights,
                                         LinearStats* stats = nullptr);

std::vector<std::uint64_t> fc_secure(Session& s, HeSession& he, const FcPlan& plan,
                                     std::span<const std::uint64_t> x,
                                     const PreprocessedWeights* weights,
                                     LinearStats* stats = nullptr);

/// Plaintext references over Z_{2^b}, inputs and outputs as ring elements.
std::vector<std::uint64_t> conv2d_reference(const Ring& ring, const ConvShape& shape,
                                            std::span<const std::uint64_t> x,
                                            std::span<const std::uint64_t> kernel);
std::vector<std::uint64_t> matvec_reference(const Ring& ring, const FcShape& shape,
                                            std::span<const std::uint64_t> w,
                                            std::span<const std::uint64_t> x);

/// Weight cache file: entries keyed by (model hash, layer id, params hash).
struct WeightCacheEntry {
  std::uint64_t model_hash = 0;
  std::uint32_t layer = 0;
  PreprocessedWeights weights;
};
void save_weight_cache(const std::filesystem::path& path, const RlweContext& ctx,
                       std::span<const WeightCacheEntry> entries);
std::vector<WeightCacheEntry> load_weight_cache(const std::filesystem::path& path,
                                                const RlweContext& ctx);

}  // namespace seconnds
