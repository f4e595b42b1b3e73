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
#include <span>
#include <vector>

#include "seconnds/crypto.hpp"
#include "seconnds/rings.hpp"
#include "seconnds/transport.hpp"

namespace seconnds {

constexpr std::size_t kOtSecurityParam = 128;

/// Sender side of a batch of random OTs: two random strings per instance.
struct RotSenderView {
  std::vector<Block> r0;
  std::vector<Block> r1;
  std::size_t size() const { return r0.size(); }
};

/// Receiver side: choice bit c and r_c per instance.
struct RotReceiverView {
  std::vector<std::uint8_t> choice;
  std::vector<Block> rc;
  std::size_t size() const { return rc.size(); }
};

/// Random-choice correlated OT, sender view: m per instance and global delta.
struct RcCotSender {
  Block delta;
  std::vector<Block> m;
  std::uint64_t first_index = 0;
  std::size_t size() const { return m.size(); }
};

/// Random-choice correlated OT, receiver view: c and m ^ c * delta.
struct RcCotReceiver {
  std::vector<std::uint8_t> choice;
  std::vector<Block> mc;
  std::uint64_t first_index = 0;
  std::size_t size() const { return mc.size(); }
};

// ---------------------------------------------------------------------------
// Base OT: "simplest OT" over the ristretto255 prime-order group. Pads are
// BLAKE2b(A || B_i || i || shared point), so two sessions with different
// transcripts never share pads.

RotSenderView base_ot_send(Channel& ch, Prg& prg, std::size_t count = kOtSecurityParam,
                           Block* transcript_key = nullptr);
RotReceiverView base_ot_recv(Channel& ch, Prg& prg, std::span<const std::uint8_t> choices,
                             Block* transcript_key = nullptr);

struct DuplexBaseOt {
  RotSenderView as_sender;
  RotReceiverView as_receiver;
  Block sender_transcript_key;    // derived from this party's A
  Block receiver_transcript_key;  // derived from the peer's A
};

/// Both parties act as sender and receiver at once, in two exchanges.
DuplexBaseOt base_ot_duplex(Channel& ch, Prg& prg, std::span<const std::uint8_t> choices,
                            std::size_t count = kOtSecurityParam);

// ---------------------------------------------------------------------------
// IKNP extension

/// Transposes a 128 x n bit matrix given as 128 columns of n bits (n a multiple
/// of 64, each column ceil(n/64) words LSB-first) into n rows of 128 bits.
std::vector<Block> transpose_columns(std::span<const std::uint64_t> columns, std::size_t n);

/// Extension sender: holds delta, was the receiver in the base OTs.
class IknpSender {
 public:
  void setup(const RotReceiverView& base, Block hash_key);
  /// Runs base OTs on ch (as base-OT receiver with choices = delta bits).
  void setup(Channel& ch, Prg& prg);

  bool ready() const { return !seeds_.empty(); }
  const Block& delta() const { return delta_; }
  const CrHash& hash() const { return *hash_; }
  std::uint64_t issued() const { return issued_; }

  /// Consumes the receiver's u-matrix for n instances.
  RcCotSender consume(std::size_t n, std::span<const std::uint8_t> u);
  RcCotSender extend(Channel& ch, std::size_t n);

 private:
  Block delta_;
  std::vector<Prg> seeds_;
  std::optional<CrHash> hash_;
  std::uint64_t issued_ = 0;
};

/// Extension receiver: was the sender in the base OTs.
class IknpReceiver {
 public:
  void setup(const RotSenderView& base, Block hash_key);
  void setup(Channel& ch, Prg& prg);

  bool ready() const { return !seeds0_.empty(); }
  const CrHash& hash() const { return *hash_; }
  std::uint64_t issued() const { return issued_; }

  /// Produces n random-choice instances and the u-matrix payload to send.
  RcCotReceiver produce(std::size_t n, Prg& prg, Bytes& u_out);
  RcCotReceiver extend(Channel& ch, Prg& prg, std::size_t n);

 private:
  std::vector<Prg> seeds0_;
  std::vector<Prg> seeds1_;
  std::optional<CrHash> hash_;
  std::uint64_t issued_ = 0;
};

/// Hashes (index, m) and (index, m ^ delta) into two independent random strings.
RotSenderView rot_from_cot(const RcCotSender& batch, const CrHash& hash);
/// Hashes (index, m_c).
RotReceiverView rot_from_cot(const RcCotReceiver& batch, const CrHash& hash);

std::size_t iknp_payload_bytes(std::size_t n);

// ---------------------------------------------------------------------------
// ROT supply

enum class OtBackend : std::uint8_t { kIknp, kDealer };

/// Per-party pools of random OTs in both directions. The pools of the two
/// parties mirror each other (this party's sender pool has the same level as
/// the peer's receiver pool) because both run the same consumption sequence,
/// so refills happen in lock-step without negotiation.
class OtEngine {
 public:
  OtEngine(Party party, OtBackend backend, Block dealer_seed, std::size_t chunk);

  /// Base OTs for both extension directions. No-op for the dealer backend.
  void setup(Channel& ch, Prg& prg);
  bool ready() const;

  /// Makes sure at least n_send / n_recv ROTs are pooled, extending as needed.
  void reserve(Channel& ch, Prg& prg, std::size_t n_send, std::size_t n_recv);
  RotSenderView take_send(std::size_t n);
  RotReceiverView take_recv(std::size_t n);

  std::size_t available_send() const { return send_pool_.size() - send_pos_; }
  std::size_t available_recv() const { return recv_pool_.size() - recv_pos_; }
  std::uint64_t produced_send() const { return produced_send_; }
  std::uint64_t produced_recv() const { return produced_recv_; }

  Party party() const { return party_; }
  OtBackend backend() const { return backend_; }
  const IknpSender& iknp_sender() const { return sender_; }

 private:
  void append_send(RotSenderView v);
  void append_recv(RotReceiverView v);
  void dealer_fill(std::size_t n_send, std::size_t n_recv);

  Party party_;
  OtBackend backend_;
  std::size_t chunk_;
  IknpSender sender_;
  IknpReceiver receiver_;
  std::optional<Prg> dealer_send_;
  std::optional<Prg> dealer_recv_;
  bool dealer_ready_ = false;

  RotSenderView send_pool_;
  std::size_t send_pos_ = 0;
  RotReceiverView recv_pool_;
  std::size_t recv_pos_ = 0;
  std::uint64_t produced_send_ = 0;
  std::uint64_t produced_recv_ = 0;
};

// ---------------------------------------------------------------------------
// Chosen-correlation COT over Z_{2^b}: the receiver learns m_s + c * delta.
// Derandomizes one ROT per instance: the receiver sends c ^ e, the sender
// answers with one b-bit correction.

std::vector<std::uint64_t> cot_send(Channel& ch, OtEngine& ot, Prg& prg, Tag tag,
                                    const Ring& ring, std::span<const std::uint64_t> deltas);
std::vector<std::uint64_t> cot_recv(Channel& ch, OtEngine& ot, Prg& prg, Tag tag,
                                    const Ring& ring, std::span<const std::uint8_t> choices);

struct CotBoth {
  std::vector<std::uint64_t> m_s;  // as sender
  std::vector<std::uint64_t> m_r;  // as receiver
};

/// Both parties are sender and receiver at once; two exchanges in total.
CotBoth cot_exchange(Channel& ch, OtEngine& ot, Prg& prg, Tag tag, const Ring& ring,
                     std::span<const std::uint64_t> deltas, std::span<const std::uint8_t> choices);

}  // namespace seconnds
