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
#include <span>
#include <vector>

#include "seconnds/program.hpp"
#include "seconnds/tensor.hpp"

namespace seconnds {

/// Plaintext fixed-point evaluation of one layer: integer conv / matvec plus
/// bias, signed max for relu and maxpool, floor division for trunc and avgpool.
std::vector<std::uint64_t> oracle_layer(const SecProgram& p, std::size_t index, const Model& m,
                                        std::span<const std::uint64_t> x);

struct OracleResult {
  std::vector<std::uint64_t> logits;  // input of the argmax layer
  std::uint64_t label = 0;            // lowest index of the signed maximum
};

OracleResult plaintext_oracle(const SecProgram& p, const Model& m, const QuantTensor& input);

/// Lowest index of the largest signed value.
std::uint64_t signed_argmax(const Ring& ring, std::span<const std::uint64_t> x);

/// Largest possible |secure - oracle| over the logits, in LSBs. Every
/// truncation may land one below the floor and every non-power-of-two
/// average two below; linear layers scale incoming deviations by their
/// largest row l1 norm.
std::uint64_t logit_error_bound(const SecProgram& p, const Model& m);

/// Mean over logits of |secure - oracle| / |oracle|, skipping zero oracle logits.
double logit_mape(const Ring& ring, std::span<const std::uint64_t> secure,
                  std::span<const std::uint64_t> oracle);

/// max |secure - oracle| under the signed view.
std::uint64_t logit_max_deviation(const Ring& ring, std::span<const std::uint64_t> secure,
                                  std::span<const std::uint64_t> oracle);

}  // namespace seconnds
