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

#include "seconnds/obliv.hpp"

#include <sodium.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <string>

#include "seconnds/errors.hpp"

static_assert(std::endian::native == std::endian::little, "wire encoding assumes a little-endian host");

namespace seconnds {

namespace {

constexpr std::size_t kPointBytes = crypto_core_ristretto255_BYTES;
constexpr std::size_t kScalarBytes = crypto_core_ristretto255_SCALARBYTES;
using Point = std::array<std::uint8_t, kPointBytes>;
using Scalar = std::array<std::uint8_t, kScalarBytes>;

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw Error("libsodium initialization failed");
}

Scalar random_scalar(Prg& prg) {
  std::uint8_t wide[crypto_core_ristretto255_NONREDUCEDSCALARBYTES];
  prg.fill(wide);
  Scalar s;
  crypto_core_ristretto255_scalar_reduce(s.data(), wide);
  return s;
}

Point base_mul(const Scalar& s) {
  Point p;
  if (crypto_scalarmult_ristretto255_base(p.data(), s.data()) != 0) {
    throw HandshakeError("base OT: degenerate scalar");
  }
  return p;
}

Point mul(const Scalar& s, const Point& p) {
  Point out;
  if (crypto_scalarmult_ristretto255(out.data(), s.data(), p.data()) != 0) {
    throw HandshakeError("base OT: invalid group element");
  }
  return out;
}

Point decode_point(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kPointBytes || crypto_core_ristretto255_is_valid_point(bytes.data()) != 1) {
    throw HandshakeError("base OT: group element failed to decode");
  }
  Point p;
  std::memcpy(p.data(), bytes.data(), kPointBytes);
  return p;
}

Block pad_hash(const Point& a, std::span<const std::uint8_t> b, std::uint64_t index,
               const Point& shared) {
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, sizeof(Block));
  crypto_generichash_update(&st, a.data(), a.size());
  crypto_generichash_update(&st, b.data(), b.size());
  std::uint8_t idx[8];
  std::memcpy(idx, &index, 8);
  crypto_generichash_update(&st, idx, sizeof(idx));
  crypto_generichash_update(&st, shared.data(), shared.size());
  Block out;
  crypto_generichash_final(&st, reinterpret_cast<std::uint8_t*>(&out), sizeof(Block));
  return out;
}

Block transcript_key(const Point& a) {
  static constexpr char kLabel[] = "seconnds/iknp-hash-key";
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, sizeof(Block));
  crypto_generichash_update(&st, reinterpret_cast<const std::uint8_t*>(kLabel), sizeof(kLabel) - 1);
  crypto_generichash_update(&st, a.data(), a.size());
  Block out;
  crypto_generichash_final(&st, reinterpret_cast<std::uint8_t*>(&out), sizeof(Block));
  return out;
}

struct SenderState {
  Scalar a;
  Point big_a;
};

SenderState sender_start(Prg& prg) {
  ensure_sodium();
  SenderState s;
  s.a = random_scalar(prg);
  s.big_a = base_mul(s.a);
  return s;
}

struct ReceiverState {
  std::vector<Scalar> b;
  Bytes msg;
};

ReceiverState receiver_start(Prg& prg, const Point& big_a, std::span<const std::uint8_t> choices) {
  ensure_sodium();
  ReceiverState r;
  r.b.reserve(choices.size());
  r.msg.resize(choices.size() * kPointBytes);
  for (std::size_t i = 0; i < choices.size(); ++i) {
    r.b.push_back(random_scalar(prg));
    Point big_b = base_mul(r.b.back());
    if (choices[i] & 1) crypto_core_ristretto255_add(big_b.data(), big_b.data(), big_a.data());
    std::memcpy(r.msg.data() + i * kPointBytes, big_b.data(), kPointBytes);
  }
  return r;
}

RotSenderView sender_finish(const SenderState& s, std::span<const std::uint8_t> msg,
                            std::size_t count) {
  if (msg.size() != count * kPointBytes) throw HandshakeError("base OT: wrong message length");
  RotSenderView out;
  out.r0.resize(count);
  out.r1.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto bi = msg.subspan(i * kPointBytes, kPointBytes);
    const Point big_b = decode_point(bi);
    Point diff;
    crypto_core_ristretto255_sub(diff.data(), big_b.data(), s.big_a.data());
    out.r0[i] = pad_hash(s.big_a, bi, i, mul(s.a, big_b));
    out.r1[i] = pad_hash(s.big_a, bi, i, mul(s.a, diff));
  }
  return out;
}

RotReceiverView receiver_finish(const ReceiverState& r, const Point& big_a,
                                std::span<const std::uint8_t> choices) {
  RotReceiverView out;
  out.choice.assign(choices.begin(), choices.end());
  out.rc.resize(choices.size());
  for (std::size_t i = 0; i < choices.size(); ++i) {
    const auto bi = std::span<const std::uint8_t>(r.msg).subspan(i * kPointBytes, kPointBytes);
    out.rc[i] = pad_hash(big_a, bi, i, mul(r.b[i], big_a));
  }
  return out;
}

// Swaps bit (k, c + j) with bit (k + j, c) for every row pair, halving j each pass.
void transpose64(std::uint64_t a[64]) {
  std::uint64_t m = 0x00000000FFFFFFFFULL;
  for (unsigned j = 32; j != 0; j >>= 1, m ^= (m << j)) {
    for (unsigned k = 0; k < 64; k = (k + j + 1) & ~j) {
      const std::uint64_t t = ((a[k] >> j) ^ a[k + j]) & m;
      a[k] ^= t << j;
      a[k + j] ^= t;
    }
  }
}

std::uint64_t pad_bits(const Block& b, const Ring& ring) { return ring.reduce(b.lo); }

}  // namespace

// ---------------------------------------------------------------------------

RotSenderView base_ot_send(Channel& ch, Prg& prg, std::size_t count, Block* key) {
  const auto st = sender_start(prg);
  ch.send_frame(Tag::kBaseOt, st.big_a, PayloadClass::kOtMessage);
  const auto msg = ch.recv_frame(Tag::kBaseOt);
  if (key) *key = transcript_key(st.big_a);
  return sender_finish(st, msg, count);
}

RotReceiverView base_ot_recv(Channel& ch, Prg& prg, std::span<const std::uint8_t> choices,
                             Block* key) {
  const Point big_a = decode_point(ch.recv_frame(Tag::kBaseOt));
  const auto st = receiver_start(prg, big_a, choices);
  ch.send_frame(Tag::kBaseOt, st.msg, PayloadClass::kOtMessage);
  if (key) *key = transcript_key(big_a);
  return receiver_finish(st, big_a, choices);
}

DuplexBaseOt base_ot_duplex(Channel& ch, Prg& prg, std::span<const std::uint8_t> choices,
                            std::size_t count) {
  const auto st = sender_start(prg);
  const Point peer_a = decode_point(ch.exchange(Tag::kBaseOt, st.big_a, PayloadClass::kOtMessage));
  const auto rs = receiver_start(prg, peer_a, choices);
  const auto peer_msg = ch.exchange(Tag::kBaseOt, rs.msg, PayloadClass::kOtMessage);
  DuplexBaseOt out;
  out.as_sender = sender_finish(st, peer_msg, count);
  out.as_receiver = receiver_finish(rs, peer_a, choices);
  out.sender_transcript_key = transcript_key(st.big_a);
  out.receiver_transcript_key = transcript_key(peer_a);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Block> transpose_columns(std::span<const std::uint64_t> columns, std::size_t n) {
  if (n % 64 != 0) throw DomainError("transpose: row count must be a multiple of 64");
  const std::size_t words = n / 64;
  if (columns.size() != kOtSecurityParam * words) throw DomainError("transpose: bad column size");
  std::vector<Block> rows(n);
  std::uint64_t a[64];
  for (std::size_t rb = 0; rb < words; ++rb) {
    for (unsigned half = 0; half < 2; ++half) {
      for (unsigned k = 0; k < 64; ++k) a[k] = columns[(half * 64 + k) * words + rb];
      transpose64(a);
      for (unsigned i = 0; i < 64; ++i) {
        auto& row = rows[rb * 64 + i];
        (half == 0 ? row.lo : row.hi) = a[i];
      }
    }
  }
  return rows;
}

std::size_t iknp_payload_bytes(std::size_t n) { return kOtSecurityParam * ((n + 63) / 64) * 8; }

void IknpSender::setup(const RotReceiverView& base, Block hash_key) {
  if (base.size() != kOtSecurityParam) throw StateError("IKNP needs exactly 128 base OTs");
  delta_ = {};
  seeds_.clear();
  for (std::size_t j = 0; j < kOtSecurityParam; ++j) {
    if (base.choice[j] & 1) {
      if (j < 64) delta_.lo |= 1ULL << j;
      else delta_.hi |= 1ULL << (j - 64);
    }
    seeds_.emplace_back(base.rc[j]);
  }
  hash_.emplace(hash_key);
  issued_ = 0;
}

void IknpSender::setup(Channel& ch, Prg& prg) {
  std::vector<std::uint8_t> choices(kOtSecurityParam);
  for (auto& c : choices) c = prg.next_bit();
  Block key;
  const auto base = base_ot_recv(ch, prg, choices, &key);
  setup(base, key);
}

RcCotSender IknpSender::consume(std::size_t n, std::span<const std::uint8_t> u) {
  if (!ready()) throw StateError("IKNP sender used before base OTs");
  const std::size_t words = (n + 63) / 64;
  if (u.size() != iknp_payload_bytes(n)) throw ProtocolDesync("IKNP: u-matrix size mismatch");
  std::vector<std::uint64_t> q(kOtSecurityParam * words);
  std::vector<std::uint64_t> uw(q.size());
  std::memcpy(uw.data(), u.data(), u.size());
  for (std::size_t j = 0; j < kOtSecurityParam; ++j) {
    auto col = std::span(q).subspan(j * words, words);
    seeds_[j].fill({reinterpret_cast<std::uint8_t*>(col.data()), col.size_bytes()});
    if (delta_.bit(static_cast<unsigned>(j))) {
      for (std::size_t w = 0; w < words; ++w) col[w] ^= uw[j * words + w];
    }
  }
  auto rows = transpose_columns(q, words * 64);
  rows.resize(n);
  RcCotSender out{delta_, std::move(rows), issued_};
  issued_ += n;
  return out;
}

RcCotSender IknpSender::extend(Channel& ch, std::size_t n) {
  const auto u = ch.recv_frame(Tag::kOtExtension);
  return consume(n, u);
}

void IknpReceiver::setup(const RotSenderView& base, Block hash_key) {
  if (base.size() != kOtSecurityParam) throw StateError("IKNP needs exactly 128 base OTs");
  seeds0_.clear();
  seeds1_.clear();
  for (std::size_t j = 0; j < kOtSecurityParam; ++j) {
    seeds0_.emplace_back(base.r0[j]);
    seeds1_.emplace_back(base.r1[j]);
  }
  hash_.emplace(hash_key);
  issued_ = 0;
}

void IknpReceiver::setup(Channel& ch, Prg& prg) {
  Block key;
  const auto base = base_ot_send(ch, prg, kOtSecurityParam, &key);
  setup(base, key);
}

RcCotReceiver IknpReceiver::produce(std::size_t n, Prg& prg, Bytes& u_out) {
  if (!ready()) throw StateError("IKNP receiver used before base OTs");
  if (n == 0) throw DomainError("IKNP: batch size must be positive");
  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> r(words);
  prg.fill({reinterpret_cast<std::uint8_t*>(r.data()), words * 8});
  std::vector<std::uint64_t> t(kOtSecurityParam * words);
  std::vector<std::uint64_t> u(t.size());
  std::vector<std::uint64_t> g1(words);
  for (std::size_t j = 0; j < kOtSecurityParam; ++j) {
    auto col = std::span(t).subspan(j * words, words);
    seeds0_[j].fill({reinterpret_cast<std::uint8_t*>(col.data()), col.size_bytes()});
    seeds1_[j].fill({reinterpret_cast<std::uint8_t*>(g1.data()), words * 8});
    for (std::size_t w = 0; w < words; ++w) u[j * words + w] = col[w] ^ g1[w] ^ r[w];
  }
  u_out.resize(u.size() * 8);
  std::memcpy(u_out.data(), u.data(), u_out.size());
  auto rows = transpose_columns(t, words * 64);
  rows.resize(n);
  RcCotReceiver out;
  out.choice.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.choice[i] = (r[i / 64] >> (i % 64)) & 1;
  out.mc = std::move(rows);
  out.first_index = issued_;
  issued_ += n;
  return out;
}

RcCotReceiver IknpReceiver::extend(Channel& ch, Prg& prg, std::size_t n) {
  Bytes u;
  auto out = produce(n, prg, u);
  ch.send_frame(Tag::kOtExtension, u, PayloadClass::kOtMessage);
  return out;
}

RotSenderView rot_from_cot(const RcCotSender& batch, const CrHash& hash) {
  RotSenderView out;
  out.r0.resize(batch.size());
  out.r1.resize(batch.size());
  std::vector<Block> shifted(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) shifted[i] = batch.m[i] ^ batch.delta;
  hash.hash(batch.m, batch.first_index, out.r0);
  hash.hash(shifted, batch.first_index, out.r1);
  return out;
}

RotReceiverView rot_from_cot(const RcCotReceiver& batch, const CrHash& hash) {
  RotReceiverView out;
  out.choice = batch.choice;
  out.rc.resize(batch.size());
  hash.hash(batch.mc, batch.first_index, out.rc);
  return out;
}

// ---------------------------------------------------------------------------

OtEngine::OtEngine(Party party, OtBackend backend, Block dealer_seed, std::size_t chunk)
    : party_(party), backend_(backend), chunk_(std::max<std::size_t>(chunk, 1)) {
  if (backend_ == OtBackend::kDealer) {
    dealer_send_.emplace(dealer_seed, 100 + index_of(party));
    dealer_recv_.emplace(dealer_seed, 100 + index_of(other(party)));
    dealer_ready_ = true;
  }
}

bool OtEngine::ready() const {
  return backend_ == OtBackend::kDealer ? dealer_ready_ : sender_.ready() && receiver_.ready();
}

void OtEngine::setup(Channel& ch, Prg& prg) {
  if (backend_ == OtBackend::kDealer) return;
  std::vector<std::uint8_t> delta_bits(kOtSecurityParam);
  for (auto& c : delta_bits) c = prg.next_bit();
  const auto base = base_ot_duplex(ch, prg, delta_bits);
  sender_.setup(base.as_receiver, base.receiver_transcript_key);
  receiver_.setup(base.as_sender, base.sender_transcript_key);
}

void OtEngine::append_send(RotSenderView v) {
  if (send_pos_ > 0) {
    send_pool_.r0.erase(send_pool_.r0.begin(), send_pool_.r0.begin() + static_cast<std::ptrdiff_t>(send_pos_));
    send_pool_.r1.erase(send_pool_.r1.begin(), send_pool_.r1.begin() + static_cast<std::ptrdiff_t>(send_pos_));
    send_pos_ = 0;
  }
  produced_send_ += v.size();
  send_pool_.r0.insert(send_pool_.r0.end(), v.r0.begin(), v.r0.end());
  send_pool_.r1.insert(send_pool_.r1.end(), v.r1.begin(), v.r1.end());
}

void OtEngine::append_recv(RotReceiverView v) {
  if (recv_pos_ > 0) {
    recv_pool_.choice.erase(recv_pool_.choice.begin(), recv_pool_.choice.begin() + static_cast<std::ptrdiff_t>(recv_pos_));
    recv_pool_.rc.erase(recv_pool_.rc.begin(), recv_pool_.rc.begin() + static_cast<std::ptrdiff_t>(recv_pos_));
    recv_pos_ = 0;
  }
  produced_recv_ += v.size();
  recv_pool_.choice.insert(recv_pool_.choice.end(), v.choice.begin(), v.choice.end());
  recv_pool_.rc.insert(recv_pool_.rc.end(), v.rc.begin(), v.rc.end());
}

void OtEngine::dealer_fill(std::size_t n_send, std::size_t n_recv) {
  // Both parties draw (r0, r1, c) per instance from the same per-direction stream.
  if (n_send) {
    RotSenderView v;
    v.r0.resize(n_send);
    v.r1.resize(n_send);
    for (std::size_t i = 0; i < n_send; ++i) {
      v.r0[i] = dealer_send_->next_block();
      v.r1[i] = dealer_send_->next_block();
      (void)dealer_send_->next_bit();
    }
    append_send(std::move(v));
  }
  if (n_recv) {
    RotReceiverView v;
    v.choice.resize(n_recv);
    v.rc.resize(n_recv);
    for (std::size_t i = 0; i < n_recv; ++i) {
      const Block r0 = dealer_recv_->next_block();
      const Block r1 = dealer_recv_->next_block();
      v.choice[i] = dealer_recv_->next_bit();
      v.rc[i] = v.choice[i] ? r1 : r0;
    }
    append_recv(std::move(v));
  }
}

void OtEngine::reserve(Channel& ch, Prg& prg, std::size_t n_send, std::size_t n_recv) {
  const std::size_t need_s = n_send > available_send() ? n_send - available_send() : 0;
  const std::size_t need_r = n_recv > available_recv() ? n_recv - available_recv() : 0;
  const std::size_t fill_s = need_s ? std::max(need_s, chunk_) : 0;
  const std::size_t fill_r = need_r ? std::max(need_r, chunk_) : 0;
  if (!fill_s && !fill_r) return;
  if (backend_ == OtBackend::kDealer) {
    dealer_fill(fill_s, fill_r);
    return;
  }
  if (!ready()) throw StateError("OT extension used before base OTs were established");

  Bytes u;
  std::optional<RcCotReceiver> recv_batch;
  if (fill_r) recv_batch = receiver_.produce(fill_r, prg, u);
  Bytes peer_u;
  if (fill_s && fill_r) {
    peer_u = ch.exchange(Tag::kOtExtension, u, PayloadClass::kOtMessage);
  } else if (fill_r) {
    ch.send_frame(Tag::kOtExtension, u, PayloadClass::kOtMessage);
  } else {
    peer_u = ch.recv_frame(Tag::kOtExtension);
  }
  if (fill_s) append_send(rot_from_cot(sender_.consume(fill_s, peer_u), sender_.hash()));
  if (recv_batch) append_recv(rot_from_cot(*recv_batch, receiver_.hash()));
}

RotSenderView OtEngine::take_send(std::size_t n) {
  if (available_send() < n) throw StateError("ROT sender pool exhausted; reserve first");
  RotSenderView v;
  const auto b = static_cast<std::ptrdiff_t>(send_pos_);
  const auto e = b + static_cast<std::ptrdiff_t>(n);
  v.r0.assign(send_pool_.r0.begin() + b, send_pool_.r0.begin() + e);
  v.r1.assign(send_pool_.r1.begin() + b, send_pool_.r1.begin() + e);
  send_pos_ += n;
  return v;
}

RotReceiverView OtEngine::take_recv(std::size_t n) {
  if (available_recv() < n) throw StateError("ROT receiver pool exhausted; reserve first");
  RotReceiverView v;
  const auto b = static_cast<std::ptrdiff_t>(recv_pos_);
  const auto e = b + static_cast<std::ptrdiff_t>(n);
  v.choice.assign(recv_pool_.choice.begin() + b, recv_pool_.choice.begin() + e);
  v.rc.assign(recv_pool_.rc.begin() + b, recv_pool_.rc.begin() + e);
  recv_pos_ += n;
  return v;
}

// ---------------------------------------------------------------------------

namespace {

// Sender half: given the peer's flip bits d, m_s = -pad(r_d) and the single
// correction y = m_s + delta + pad(r_{1-d}).
void cot_sender_corrections(const Ring& ring, const RotSenderView& rots,
                            std::span<const std::uint8_t> flips,
                            std::span<const std::uint64_t> deltas, std::vector<std::uint64_t>& m_s,
                            std::vector<std::uint64_t>& y) {
  const std::size_t n = deltas.size();
  m_s.resize(n);
  y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool d = flips[i] & 1;
    const Block& keep = d ? rots.r1[i] : rots.r0[i];
    const Block& other_pad = d ? rots.r0[i] : rots.r1[i];
    m_s[i] = ring.neg(pad_bits(keep, ring));
    y[i] = ring.add(ring.add(m_s[i], ring.reduce(deltas[i])), pad_bits(other_pad, ring));
  }
}

std::vector<std::uint8_t> cot_receiver_flips(const RotReceiverView& rots,
                                             std::span<const std::uint8_t> choices) {
  std::vector<std::uint8_t> flips(choices.size());
  for (std::size_t i = 0; i < choices.size(); ++i) flips[i] = (choices[i] ^ rots.choice[i]) & 1;
  return flips;
}

std::vector<std::uint64_t> cot_receiver_finish(const Ring& ring, const RotReceiverView& rots,
                                               std::span<const std::uint8_t> choices,
                                               std::span<const std::uint64_t> y) {
  std::vector<std::uint64_t> m_r(choices.size());
  for (std::size_t i = 0; i < choices.size(); ++i) {
    const std::uint64_t pad = pad_bits(rots.rc[i], ring);
    m_r[i] = (choices[i] & 1) ? ring.sub(y[i], pad) : ring.neg(pad);
  }
  return m_r;
}

}  // namespace

std::vector<std::uint64_t> cot_send(Channel& ch, OtEngine& ot, Prg& prg, Tag tag,
                                    const Ring& ring, std::span<const std::uint64_t> deltas) {
  const std::size_t n = deltas.size();
  if (n == 0) return {};
  ot.reserve(ch, prg, n, 0);
  const auto rots = ot.take_send(n);
  std::vector<std::uint8_t> flips(n);
  unpack_bits(ch.recv_frame(tag), flips);
  std::vector<std::uint64_t> m_s, y;
  cot_sender_corrections(ring, rots, flips, deltas, m_s, y);
  ch.send_frame(tag, pack_words(y, ring.bits()), PayloadClass::kMaskedValues);
  ch.record_cots(tag, n);
  return m_s;
}

std::vector<std::uint64_t> cot_recv(Channel& ch, OtEngine& ot, Prg& prg, Tag tag,
                                    const Ring& ring, std::span<const std::uint8_t> choices) {
  const std::size_t n = choices.size();
  if (n == 0) return {};
  ot.reserve(ch, prg, 0, n);
  const auto rots = ot.take_recv(n);
  ch.send_frame(tag, pack_bits(cot_receiver_flips(rots, choices)), PayloadClass::kOtMessage);
  const auto y = unpack_words(ch.recv_frame(tag), n, ring.bits());
  ch.record_cots(tag, n);
  return cot_receiver_finish(ring, rots, choices, y);
}

CotBoth cot_exchange(Channel& ch, OtEngine& ot, Prg& prg, Tag tag, const Ring& ring,
                     std::span<const std::uint64_t> deltas,
                     std::span<const std::uint8_t> choices) {
  const std::size_t ns = deltas.size();
  const std::size_t nr = choices.size();
  if (ns == 0 && nr == 0) return {};
  ot.reserve(ch, prg, ns, nr);
  const auto srots = ot.take_send(ns);
  const auto rrots = ot.take_recv(nr);

  std::vector<std::uint8_t> peer_flips(ns);
  unpack_bits(ch.exchange(tag, pack_bits(cot_receiver_flips(rrots, choices)),
                          PayloadClass::kOtMessage),
              peer_flips);
  CotBoth out;
  std::vector<std::uint64_t> y;
  cot_sender_corrections(ring, srots, peer_flips, deltas, out.m_s, y);
  const auto peer_y = unpack_words(
      ch.exchange(tag, pack_words(y, ring.bits()), PayloadClass::kMaskedValues), nr, ring.bits());
  out.m_r = cot_receiver_finish(ring, rrots, choices, peer_y);
  ch.record_cots(tag, ns + nr);
  return out;
}

}  // namespace seconnds
