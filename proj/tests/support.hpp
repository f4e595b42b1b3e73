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
#include <utility>

#include "seconnds/crypto.hpp"
#include "seconnds/inference.hpp"
#include "seconnds/rings.hpp"
#include "seconnds/session.hpp"
#include "seconnds/transport.hpp"

namespace seconnds::testing {

inline SessionConfig test_config(unsigned bits = 37, MillVariant mill = MillVariant::kLinear,
                                 TripleBackend backend = TripleBackend::kDealer) {
  SessionConfig c;
  c.ring.bits = bits;
  c.ring.scale = bits > 12 ? 12 : 0;
  c.mill = mill;
  c.backend = backend;
  c.test_mode = true;
  c.triple_chunk = std::size_t{1} << 14;
  c.triple_buffer = std::size_t{1} << 14;
  c.ot_chunk = std::size_t{1} << 12;
  c.seed = Block{0x1234, 0x5678};
  return c;
}

/// Runs f(session) for both parties over a loopback pair and returns
/// {server result, client result}. Base OTs run first for the IKNP backend.
template <class F>
auto run_two(const SessionConfig& cfg, F&& f) {
  auto party = [&](Party p) {
    return [&, p](Channel& ch) {
      Session s(p, ch, cfg);
      if (cfg.backend == TripleBackend::kIknp) s.setup();
      return f(s);
    };
  };
  return run_pair(party(Party::kServer), party(Party::kClient));
}

/// Deterministic test randomness.
inline Prg test_prg(std::uint64_t stream = 0) { return Prg(Block{0xC0FFEE, 0xFACADE}, stream); }

struct SecureRun {
  std::optional<std::uint64_t> label;
  std::vector<std::uint64_t> logits;
  RunReport server;
  RunReport client;
};

/// Both parties run the compiled program; the logits are reconstructed in process.
inline SecureRun secure_run(const SessionConfig& cfg, const CompiledProgram& cp,
                            const ServerModel& model, const QuantTensor& input) {
  auto [r0, r1] = run_two(cfg, [&](Session& s) {
    return execute_inference(s, cp, s.is_server() ? &model : nullptr,
                             s.is_server() ? nullptr : &input);
  });
  const Ring ring(cfg.ring.bits);
  return SecureRun{r1.label, reconstruct(ring, r0.logit_share, r1.logit_share),
                   std::move(r0.report), std::move(r1.report)};
}

inline SessionConfig program_config(const SecProgram& p, TripleBackend backend = TripleBackend::kDealer) {
  auto cfg = test_config(p.ring.bits, p.mill, backend);
  cfg.ring.scale = p.ring.scale;
  return cfg;
}

}  // namespace seconnds::testing
