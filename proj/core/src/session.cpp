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

#include "seconnds/session.hpp"

#include "seconnds/errors.hpp"

namespace seconnds {

const char* mill_variant_name(MillVariant v) {
  return v == MillVariant::kLinear ? "linear" : "logdepth";
}

MillVariant parse_mill_variant(const std::string& s) {
  if (s == "linear") return MillVariant::kLinear;
  if (s == "logdepth") return MillVariant::kLogDepth;
  throw ConfigError("unknown mill variant '" + s + "'");
}

const char* triple_backend_name(TripleBackend b) {
  return b == TripleBackend::kIknp ? "iknp" : "dealer";
}

TripleBackend parse_triple_backend(const std::string& s) {
  if (s == "iknp") return TripleBackend::kIknp;
  if (s == "dealer") return TripleBackend::kDealer;
  throw ConfigError("unknown triple backend '" + s + "'");
}

void SessionConfig::validate() const {
  ring.validate();
  if (backend == TripleBackend::kDealer && !test_mode) {
    throw ConfigError("dealer triple backend is insecure and only allowed in test mode");
  }
  if (triple_chunk == 0 || ot_chunk == 0) throw ConfigError("chunk sizes must be positive");
}

namespace {

// Domain-separates the two parties' randomness when they share a fixed seed.
Block party_seed(const SessionConfig& c, Party p) {
  if (c.seed == Block{}) return os_random_block();
  Block s = c.seed;
  s.hi ^= 0x9e3779b97f4a7c15ULL * (index_of(p) + 1);
  return s;
}

OtBackend ot_backend(TripleBackend b) {
  return b == TripleBackend::kDealer ? OtBackend::kDealer : OtBackend::kIknp;
}

Block derive(Block seed, std::uint64_t k) {
  seed.lo ^= k * 0xd1b54a32d192ed03ULL;
  return seed;
}

}  // namespace

Session::Session(Party party, Channel& ch, SessionConfig config)
    : party_(party),
      ch_(&ch),
      config_((config.validate(), config)),
      ring_(config_.ring.bits),
      triple_prg_(party_seed(config_, party), static_cast<std::uint64_t>(Stream::kTripleOt)),
      cot_prg_(party_seed(config_, party), static_cast<std::uint64_t>(Stream::kCot)),
      he_prg_(party_seed(config_, party), static_cast<std::uint64_t>(Stream::kHe)),
      mask_prg_(party_seed(config_, party), static_cast<std::uint64_t>(Stream::kMask)),
      input_prg_(party_seed(config_, party), static_cast<std::uint64_t>(Stream::kInput)),
      triple_ot_(party, ot_backend(config_.backend), derive(config_.dealer_seed, 1),
                 config_.ot_chunk),
      cot_ot_(party, ot_backend(config_.backend), derive(config_.dealer_seed, 2),
              config_.ot_chunk),
      triples_(party, config_.backend, &triple_ot_, derive(config_.dealer_seed, 3),
               config_.triple_chunk, config_.triple_buffer) {}

void Session::setup() {
  triple_ot_.setup(*ch_, triple_prg_);
  cot_ot_.setup(*ch_, cot_prg_);
}

void Session::prefill_triples(std::size_t n) { triples_.fill(*ch_, triple_prg_, n); }

void Session::prefill_cots(std::size_t n) { cot_ot_.reserve(*ch_, cot_prg_, n, n); }

Prg& Session::prg(Stream s) {
  switch (s) {
    case Stream::kTripleOt: return triple_prg_;
    case Stream::kCot: return cot_prg_;
    case Stream::kHe: return he_prg_;
    case Stream::kMask: return mask_prg_;
    case Stream::kInput: return input_prg_;
  }
  throw StateError("unknown randomness stream");
}

TripleBatch Session::take_triples(std::size_t n) { return triples_.get(*ch_, triple_prg_, n); }

}  // namespace seconnds
