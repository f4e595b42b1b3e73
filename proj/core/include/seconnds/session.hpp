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
#include <memory>
#include <string>

#include "seconnds/crypto.hpp"
#include "seconnds/obliv.hpp"
#include "seconnds/rings.hpp"
#include "seconnds/transport.hpp"
#include "seconnds/triples.hpp"

namespace seconnds {

enum class MillVariant : std::uint8_t { kLinear, kLogDepth };

const char* mill_variant_name(MillVariant v);
MillVariant parse_mill_variant(const std::string& s);
TripleBackend parse_triple_backend(const std::string& s);
const char* triple_backend_name(TripleBackend b);

struct SessionConfig {
  RingParams ring;
  MillVariant mill = MillVariant::kLinear;
  TripleBackend backend = TripleBackend::kIknp;
  std::size_t triple_chunk = std::size_t{1} << 18;
  std::size_t triple_buffer = std::size_t{1} << 18;
  std::size_t ot_chunk = std::size_t{1} << 16;
  bool eager_fill = true;
  /// Sends the a-part of fresh ciphertexts as a 32-byte seed.
  bool he_seed_compress = true;
  std::size_t he_degree = 4096;
  /// Permits the dealer backend. Never set outside tests and benchmarks.
  bool test_mode = false;
  /// Shared by both parties in dealer mode only.
  Block dealer_seed{0x5eed5eed5eed5eedULL, 0x0123456789abcdefULL};
  /// Root of all local randomness. Zero means fresh OS entropy.
  Block seed{};

  void validate() const;
};

/// Randomness streams of one party. Each purpose has its own stream so that
/// work done under one purpose never shifts the values drawn under another.
enum class Stream : std::uint64_t {
  kTripleOt = 1,
  kCot = 2,
  kHe = 3,
  kMask = 4,
  kInput = 5,
};

/// Everything one party needs to run protocols over one channel.
class Session {
 public:
  Session(Party party, Channel& ch, SessionConfig config);

  /// Base OTs for both OT engines (IKNP backend only).
  void setup();
  bool ready() const { return triple_ot_.ready() && cot_ot_.ready(); }
  /// Pre-generates triples until at least n are stored.
  void prefill_triples(std::size_t n);
  /// Pools at least n ROTs in each direction for COTs.
  void prefill_cots(std::size_t n);

  Party party() const { return party_; }
  bool is_server() const { return party_ == Party::kServer; }
  Channel& channel() { return *ch_; }
  const SessionConfig& config() const { return config_; }
  MillVariant mill_variant() const { return config_.mill; }
  void set_mill_variant(MillVariant v) { config_.mill = v; }
  const Ring& ring() const { return ring_; }

  Prg& prg(Stream s);
  OtEngine& cot_engine() { return cot_ot_; }
  OtEngine& triple_engine() { return triple_ot_; }
  TripleBuffer& triples() { return triples_; }

  /// n triples from the buffer, refilling on demand.
  TripleBatch take_triples(std::size_t n);

 private:
  Party party_;
  Channel* ch_;
  SessionConfig config_;
  Ring ring_;
  Prg triple_prg_;
  Prg cot_prg_;
  Prg he_prg_;
  Prg mask_prg_;
  Prg input_prg_;
  OtEngine triple_ot_;
  OtEngine cot_ot_;
  TripleBuffer triples_;
};

}  // namespace seconnds
