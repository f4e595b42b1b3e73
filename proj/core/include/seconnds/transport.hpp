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

#include <array>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>

#include "seconnds/bytes.hpp"

namespace seconnds {

/// Protocol identifier carried in every frame. Meters are kept per tag.
enum class Tag : std::uint8_t {
  kControl = 0,
  kBaseOt,
  kOtExtension,
  kAnd,
  kB2A,
  kCot,
  kMill,
  kDrelu,
  kRelu,
  kTrunc,
  kMaxPool,
  kAvgPool,
  kArgMax,
  kHeSetup,
  kConv,
  kFc,
  kLabel,
  kTest,
  kCount_
};

constexpr std::size_t kNumTags = static_cast<std::size_t>(Tag::kCount_);
const char* tag_name(Tag tag);

/// What a frame's payload is, for the outbound-traffic audit hook. Not sent on the wire.
enum class PayloadClass : std::uint8_t {
  kControl,         // parameter / shape agreement, never data-dependent
  kOtMessage,       // base-OT group elements, IKNP matrices, choice flips
  kCorrectionBits,  // GMW correction bits masked by triples
  kMaskedValues,    // one-time-padded ring elements (COT corrections)
  kCiphertext,      // RLWE ciphertexts and public keys
  kLabelOpening,    // the server's share of the final label
};
const char* payload_class_name(PayloadClass c);

struct TagCounters {
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_received = 0;
  std::uint64_t rounds = 0;
  std::uint64_t and_gates = 0;
  std::uint64_t triples_consumed = 0;
  std::uint64_t cots = 0;

  TagCounters& operator+=(const TagCounters& o);
  TagCounters operator-(const TagCounters& o) const;
  bool operator==(const TagCounters&) const = default;
  std::uint64_t bytes() const { return bytes_sent + bytes_received; }
};

/// Per-tag traffic and work counters. A round is counted whenever traffic
/// under a tag changes direction; a simultaneous exchange (both parties send,
/// then both receive) counts as exactly one round.
class SessionMeter {
 public:
  const TagCounters& at(Tag tag) const { return tags_[static_cast<std::size_t>(tag)]; }
  TagCounters& at(Tag tag) { return tags_[static_cast<std::size_t>(tag)]; }
  TagCounters total() const;
  bool empty() const { return total() == TagCounters{}; }

  void on_send(Tag tag, std::size_t bytes);
  void on_recv(Tag tag, std::size_t bytes);
  void on_exchange(Tag tag, std::size_t sent, std::size_t received);

 private:
  enum class Dir : std::uint8_t { kNone, kSend, kRecv, kBoth };
  std::array<TagCounters, kNumTags> tags_{};
  std::array<Dir, kNumTags> last_{};
};

/// Reliable ordered byte pipe.
class ByteStream {
 public:
  virtual ~ByteStream() = default;
  virtual void write(std::span<const std::uint8_t> data) = 0;
  virtual void read(std::span<std::uint8_t> out) = 0;
  virtual void close() = 0;
};

/// Two in-memory streams wired back to back.
std::pair<std::unique_ptr<ByteStream>, std::unique_ptr<ByteStream>> make_loopback_pair();

std::unique_ptr<ByteStream> tcp_listen_accept(std::uint16_t port);
std::unique_ptr<ByteStream> tcp_connect(const std::string& host, std::uint16_t port,
                                        int retries = 50);

constexpr std::size_t kFrameHeaderBytes = 5;
constexpr std::size_t kMaxPayloadBytes = std::size_t{1} << 30;

/// Length-prefixed frames (u32 LE length = payload + 1, u8 tag, payload) with metering.
class Channel {
 public:
  using SendObserver = std::function<void(Tag, PayloadClass, std::size_t)>;

  explicit Channel(std::unique_ptr<ByteStream> stream);
  ~Channel();
  Channel(Channel&&) noexcept;
  Channel& operator=(Channel&&) noexcept;

  void send_frame(Tag tag, std::span<const std::uint8_t> payload,
                  PayloadClass cls = PayloadClass::kControl);
  Bytes recv_frame(Tag expected);
  /// Sends a frame and then receives the peer's frame under the same tag.
  Bytes exchange(Tag tag, std::span<const std::uint8_t> payload,
                 PayloadClass cls = PayloadClass::kControl);

  SessionMeter meter_snapshot() const { return meter_; }
  const SessionMeter& meter() const { return meter_; }
  void record_and_gates(Tag tag, std::uint64_t n) { meter_.at(tag).and_gates += n; }
  void record_triples(Tag tag, std::uint64_t n) { meter_.at(tag).triples_consumed += n; }
  void record_cots(Tag tag, std::uint64_t n) { meter_.at(tag).cots += n; }

  void set_send_observer(SendObserver observer) { observer_ = std::move(observer); }
  void close();

 private:
  void write_frame(Tag tag, std::span<const std::uint8_t> payload, PayloadClass cls);
  Bytes read_frame(Tag expected);

  std::unique_ptr<ByteStream> stream_;
  SessionMeter meter_;
  SendObserver observer_;
};

std::pair<Channel, Channel> make_loopback_channels();

/// Runs party 0 on a helper thread and party 1 on the calling thread over a
/// loopback channel pair. An exception on either side closes both channels so
/// the peer unblocks, then the first exception is rethrown.
template <class F0, class F1>
auto run_pair(F0&& server, F1&& client) {
  auto [c0, c1] = make_loopback_channels();
  using R0 = decltype(server(c0));
  using R1 = decltype(client(c1));
  std::optional<R0> r0;
  std::optional<R1> r1;
  std::exception_ptr e0, e1;
  std::thread t([&] {
    try {
      r0.emplace(server(c0));
    } catch (...) {
      e0 = std::current_exception();
      c0.close();
    }
  });
  try {
    r1.emplace(client(c1));
  } catch (...) {
    e1 = std::current_exception();
    c1.close();
  }
  t.join();
  if (e0) std::rethrow_exception(e0);
  if (e1) std::rethrow_exception(e1);
  return std::pair<R0, R1>(std::move(*r0), std::move(*r1));
}

}  // namespace seconnds
