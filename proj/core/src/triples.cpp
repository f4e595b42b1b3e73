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

#include "seconnds/triples.hpp"

#include <algorithm>

#include "seconnds/errors.hpp"

namespace seconnds {

TripleShare triple_from_rots(std::uint8_t choice, std::uint8_t rc, std::uint8_t s0,
                             std::uint8_t s1) {
  TripleShare t;
  t.a = choice & 1;
  t.b = (s0 ^ s1) & 1;
  t.c = static_cast<std::uint8_t>((t.a & t.b) ^ (rc & 1) ^ (s0 & 1));
  return t;
}

namespace {

// Draws 64 triples per step: five random words give a0, b0, c0, a1, b1 and c1
// follows from the triple relation.
void dealer_draw(Prg& prg, std::size_t n, TripleBatch* server, TripleBatch* client) {
  for (auto* t : {server, client}) {
    if (!t) continue;
    t->a.resize(n);
    t->b.resize(n);
    t->c.resize(n);
  }
  for (std::size_t base = 0; base < n; base += 64) {
    const std::uint64_t a0 = prg.next_u64();
    const std::uint64_t b0 = prg.next_u64();
    const std::uint64_t c0 = prg.next_u64();
    const std::uint64_t a1 = prg.next_u64();
    const std::uint64_t b1 = prg.next_u64();
    const std::uint64_t c1 = c0 ^ ((a0 ^ a1) & (b0 ^ b1));
    const std::size_t lim = std::min<std::size_t>(64, n - base);
    for (std::size_t k = 0; k < lim; ++k) {
      if (server) {
        server->a[base + k] = (a0 >> k) & 1;
        server->b[base + k] = (b0 >> k) & 1;
        server->c[base + k] = (c0 >> k) & 1;
      }
      if (client) {
        client->a[base + k] = (a1 >> k) & 1;
        client->b[base + k] = (b1 >> k) & 1;
        client->c[base + k] = (c1 >> k) & 1;
      }
    }
  }
}

constexpr std::uint64_t kDealerTripleStream = 200;

}  // namespace

std::pair<TripleBatch, TripleBatch> dealer_gen(std::size_t n, Block seed) {
  Prg prg(seed, kDealerTripleStream);
  std::pair<TripleBatch, TripleBatch> out;
  dealer_draw(prg, n, &out.first, &out.second);
  return out;
}

TripleBuffer::TripleBuffer(Party party, TripleBackend backend, OtEngine* ot, Block dealer_seed,
                           std::size_t chunk, std::size_t capacity)
    : party_(party),
      backend_(backend),
      ot_(ot),
      chunk_(std::max<std::size_t>(chunk, 1)),
      capacity_(std::max(capacity, chunk_)) {
  if (backend_ == TripleBackend::kIknp && !ot_) {
    throw ConfigError("IKNP triple backend needs an OT engine");
  }
  if (backend_ == TripleBackend::kDealer) dealer_.emplace(dealer_seed, kDealerTripleStream);
}

void TripleBuffer::compact() {
  if (pos_ == 0) return;
  const auto p = static_cast<std::ptrdiff_t>(pos_);
  store_.a.erase(store_.a.begin(), store_.a.begin() + p);
  store_.b.erase(store_.b.begin(), store_.b.begin() + p);
  store_.c.erase(store_.c.begin(), store_.c.begin() + p);
  pos_ = 0;
}

void TripleBuffer::generate_chunk(Channel& ch, Prg& prg, std::size_t m) {
  compact();
  TripleBatch fresh;
  if (backend_ == TripleBackend::kDealer) {
    dealer_draw(*dealer_, m, party_ == Party::kServer ? &fresh : nullptr,
                party_ == Party::kClient ? &fresh : nullptr);
  } else {
    ot_->reserve(ch, prg, m, m);
    const auto recv = ot_->take_recv(m);
    const auto send = ot_->take_send(m);
    fresh.a.resize(m);
    fresh.b.resize(m);
    fresh.c.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto t = triple_from_rots(recv.choice[i], static_cast<std::uint8_t>(recv.rc[i].lo),
                                      static_cast<std::uint8_t>(send.r0[i].lo),
                                      static_cast<std::uint8_t>(send.r1[i].lo));
      fresh.a[i] = t.a;
      fresh.b[i] = t.b;
      fresh.c[i] = t.c;
    }
  }
  store_.a.insert(store_.a.end(), fresh.a.begin(), fresh.a.end());
  store_.b.insert(store_.b.end(), fresh.b.begin(), fresh.b.end());
  store_.c.insert(store_.c.end(), fresh.c.begin(), fresh.c.end());
  generated_ += m;
  ++chunks_;
}

void TripleBuffer::fill(Channel& ch, Prg& prg, std::size_t n) {
  if (n > capacity_) capacity_ = n;
  while (available() < n) {
    generate_chunk(ch, prg, std::min(chunk_, capacity_ - available()));
  }
}

TripleBatch TripleBuffer::get(Channel& ch, Prg& prg, std::size_t n) {
  if (n == 0) return {};
  if (n > capacity_) capacity_ = n;
  while (available() < n) generate_chunk(ch, prg, std::min(chunk_, capacity_ - available()));
  TripleBatch out;
  const auto b = static_cast<std::ptrdiff_t>(pos_);
  const auto e = b + static_cast<std::ptrdiff_t>(n);
  out.a.assign(store_.a.begin() + b, store_.a.begin() + e);
  out.b.assign(store_.b.begin() + b, store_.b.begin() + e);
  out.c.assign(store_.c.begin() + b, store_.c.begin() + e);
  pos_ += n;
  consumed_ += n;
  return out;
}

}  // namespace seconnds
