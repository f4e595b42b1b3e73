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
#include <memory>
#include <optional>
#include <vector>

#include "seconnds/lattice.hpp"
#include "seconnds/linconv.hpp"
#include "seconnds/program.hpp"
#include "seconnds/report.hpp"
#include "seconnds/session.hpp"

namespace seconnds {

/// Triples (one per AND gate) and COTs one party spends on a layer.
struct LayerDemand {
  std::uint64_t triples = 0;
  std::uint64_t cots = 0;

  LayerDemand& operator+=(const LayerDemand& o) {
    triples += o.triples;
    cots += o.cots;
    return *this;
  }
};

LayerDemand layer_demand(const Layer& L, unsigned bits, MillVariant v);

/// A validated program with its HE parameters and packing plans. Both parties
/// build the same object from the shared program file.
class CompiledProgram {
 public:
  CompiledProgram(SecProgram program, std::size_t he_degree);

  const SecProgram& program() const { return program_; }
  const RlweContext& he() const { return *ctx_; }
  /// Packing layout of conv / fc layer i.
  const LinearLayout& layout(std::size_t i) const;
  LayerDemand demand(std::size_t i, MillVariant v) const;
  LayerDemand total_demand(MillVariant v) const;

 private:
  SecProgram program_;
  std::shared_ptr<RlweContext> ctx_;
  std::map<std::size_t, LinearLayout> layouts_;
};

/// Server-side model with NTT-preprocessed weight polynomials.
struct ServerModel {
  Model model;
  std::uint64_t model_hash = 0;
  std::map<std::uint32_t, PreprocessedWeights> weights;
  std::map<std::uint32_t, double> preprocess_ms;
  std::size_t cache_hits = 0;
};

/// Preprocesses every linear layer. With a cache path, entries for this model
/// and parameter set are reused and missing ones are written back.
ServerModel prepare_server_model(const CompiledProgram& cp, Model model,
                                 const std::optional<std::filesystem::path>& cache = std::nullopt);

struct InferenceResult {
  /// Client only.
  std::optional<std::uint64_t> label;
  /// This party's share of the argmax input.
  std::vector<std::uint64_t> logit_share;
  LinearStats linear;
  RunReport report;
};

/// Runs the whole program. The server passes its model, the client its input;
/// the other pointer must be null. Base OTs run if the session has none yet,
/// then HE keys are set up and the triple and COT pools are filled to the
/// program's demand before the first layer.
InferenceResult execute_inference(Session& s, const CompiledProgram& cp,
                                  const ServerModel* model, const QuantTensor* input);

/// Fixture network: conv 4x3x3 + bias, relu, trunc by 4, maxpool 2x2,
/// fc 10 + bias, argmax, on a 1x10x10 input at 37 bits.
struct Fixture {
  SecProgram program;
  Model model;
};
Fixture make_tinynet(std::uint64_t seed);

/// Uniform signed input in [-2^magnitude_bits, 2^magnitude_bits).
QuantTensor random_input(const SecProgram& p, std::uint64_t seed, unsigned magnitude_bits = 11);

}  // namespace seconnds
