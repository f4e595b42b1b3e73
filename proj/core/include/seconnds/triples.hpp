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
#include <optional>
#include <utility>
#include <vector>

#include "seconnds/crypto.hpp"
#include "seconnds/obliv.hpp"
#include "seconnds/rings.hpp"
#include "seconnds/transport.hpp"

namespace seconnds {

/// One party's shares of a batch of Beaver bit triples, one bit per byte.
struct TripleBatch {
  std::vector<std::uint8_t> a;
  std::vector<std::uint8_t> b;
  std::vector<std::uint8_t> c;

  std::size_t size() const { return a.size(); }
};

struct TripleShare {
  std::uint8_t a = 0;
  std::uint8_t b = 0;
  std::uint8_t c = 0;
};

/// Local step of triple generation. The party was receiver in one ROT (choice,
/// rc) and sender in the other (s0, s1); only the low bit of each string is used.
TripleShare triple_from_rots(std::uint8_t choice, std::uint8_t rc, std::uint8_t s0,
                             std::uint8_t s1);

/// Both parties' shares of n dealer triples drawn from seed. Test and benchmark use only.
std::pair<TripleBatch, TripleBatch> dealer_gen(std::size_t n, Block seed);

enum class TripleBackend : std::uint8_t { kIknp, kDealer };

/// Chunked triple store. Both parties issue the same sequence of get/fill
/// calls, so refills run in lock-step on both sides.
class TripleBuffer {
 public:
  /// The IKNP backend draws ROTs from ot; the dealer backend expands dealer_seed.
  TripleBuffer(Party party, TripleBackend backend, OtEngine* ot, Block dealer_seed,
               std::size_t chunk, std::size_t capacity);

  /// Returns exactly n unused triples, generating chunks as needed. The
  /// capacity grows to n if n exceeds it.
  TripleBatch get(Channel& ch, Prg& prg, std::size_t n);
  /// Generates chunks until at least n triples are stored, growing the capacity if needed.
  void fill(Channel& ch, Prg& prg, std::size_t n);

  std::size_t available() const { return store_.size() - pos_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t chunk() const { return chunk_; }
  std::uint64_t generated() const { return generated_; }
  std::uint64_t consumed() const { return consumed_; }
  std::uint64_t chunks_generated() const { return chunks_; }
  TripleBackend backend() const { return backend_; }

 private:
  void generate_chunk(Channel& ch, Prg& prg, std::size_t m);
  void compact();

  Party party_;
  TripleBackend backend_;
  OtEngine* ot_;
  std::optional<Prg> dealer_;
  std::size_t chunk_;
  std::size_t capacity_;
  TripleBatch store_;
  std::size_t pos_ = 0;
  std::uint64_t generated_ = 0;
  std::uint64_t consumed_ = 0;
  std::uint64_t chunks_ = 0;
};

}  // namespace seconnds
