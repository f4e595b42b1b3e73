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

#include <gtest/gtest.h>

#include <thread>

#include "seconnds/errors.hpp"
#include "seconnds/transport.hpp"
#include "support.hpp"

namespace seconnds {
namespace {

TEST(Channel, EmptyPayload) {
  auto [a, b] = make_loopback_channels();
  a.send_frame(Tag::kTest, {});
  EXPECT_TRUE(b.recv_frame(Tag::kTest).empty());
  EXPECT_EQ(a.meter().at(Tag::kTest).bytes_sent, kFrameHeaderBytes);
}

TEST(Channel, OneMebibyteEcho) {
  auto [a, b] = make_loopback_channels();
  Bytes payload(1 << 20);
  auto prg = testing::test_prg();
  prg.fill(payload);
  std::thread t([&] { b.send_frame(Tag::kTest, b.recv_frame(Tag::kTest)); });
  a.send_frame(Tag::kTest, payload);
  const Bytes back = a.recv_frame(Tag::kTest);
  t.join();
  EXPECT_EQ(back, payload);
}

TEST(Channel, FifoAcrossTags) {
  auto [a, b] = make_loopback_channels();
  const Bytes p1{1}, p2{2, 2}, p3{3, 3, 3};
  a.send_frame(Tag::kAnd, p1);
  a.send_frame(Tag::kCot, p2);
  a.send_frame(Tag::kAnd, p3);
  EXPECT_EQ(b.recv_frame(Tag::kAnd), p1);
  EXPECT_EQ(b.recv_frame(Tag::kCot), p2);
  EXPECT_EQ(b.recv_frame(Tag::kAnd), p3);
}

TEST(Channel, TagMismatchIsDesync) {
  auto [a, b] = make_loopback_channels();
  a.send_frame(Tag::kAnd, Bytes{1});
  EXPECT_THROW(b.recv_frame(Tag::kCot), ProtocolDesync);
}

TEST(Channel, ClosedPeerIsTransportError) {
  auto [a, b] = make_loopback_channels();
  a.close();
  EXPECT_THROW(b.recv_frame(Tag::kTest), TransportError);
}

TEST(Meter, ZeroBeforeTraffic) {
  auto [a, b] = make_loopback_channels();
  EXPECT_TRUE(a.meter_snapshot().empty());
  EXPECT_EQ(a.meter().total(), TagCounters{});
}

TEST(Meter, PingPongIsTwoRounds) {
  auto [a, b] = make_loopback_channels();
  std::thread t([&] { b.send_frame(Tag::kTest, b.recv_frame(Tag::kTest)); });
  a.send_frame(Tag::kTest, Bytes{7});
  a.recv_frame(Tag::kTest);
  t.join();
  EXPECT_EQ(a.meter().at(Tag::kTest).rounds, 2u);
  EXPECT_EQ(b.meter().at(Tag::kTest).rounds, 2u);
}

TEST(Meter, ExchangeIsOneRoundAndMirrored) {
  auto [a, b] = make_loopback_channels();
  std::thread t([&] { b.exchange(Tag::kAnd, Bytes(10)); });
  a.exchange(Tag::kAnd, Bytes(3));
  t.join();
  const auto& ma = a.meter().at(Tag::kAnd);
  const auto& mb = b.meter().at(Tag::kAnd);
  EXPECT_EQ(ma.rounds, 1u);
  EXPECT_EQ(mb.rounds, 1u);
  EXPECT_EQ(ma.bytes_sent, mb.bytes_received);
  EXPECT_EQ(ma.bytes_received, mb.bytes_sent);
  EXPECT_EQ(ma.bytes_sent, 3 + kFrameHeaderBytes);
}

TEST(Meter, SameDirectionFramesShareARound) {
  auto [a, b] = make_loopback_channels();
  for (int i = 0; i < 5; ++i) a.send_frame(Tag::kTest, Bytes{1});
  for (int i = 0; i < 5; ++i) b.recv_frame(Tag::kTest);
  EXPECT_EQ(a.meter().at(Tag::kTest).rounds, 1u);
  EXPECT_EQ(b.meter().at(Tag::kTest).rounds, 1u);
}

TEST(Meter, ObserverSeesEveryFrame) {
  auto [a, b] = make_loopback_channels();
  std::vector<PayloadClass> seen;
  a.set_send_observer([&](Tag, PayloadClass c, std::size_t) { seen.push_back(c); });
  a.send_frame(Tag::kTest, Bytes{1}, PayloadClass::kMaskedValues);
  a.send_frame(Tag::kTest, Bytes{1}, PayloadClass::kCiphertext);
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_EQ(seen[0], PayloadClass::kMaskedValues);
  EXPECT_EQ(seen[1], PayloadClass::kCiphertext);
}

TEST(Tcp, LoopbackFrames) {
  const std::uint16_t port = 39000 + static_cast<std::uint16_t>(::getpid() % 2000);
  Bytes got;
  std::thread server([&] {
    Channel ch(tcp_listen_accept(port));
    got = ch.recv_frame(Tag::kTest);
    ch.send_frame(Tag::kTest, got);
  });
  Channel ch(tcp_connect("127.0.0.1", port));
  const Bytes payload{9, 8, 7, 6};
  ch.send_frame(Tag::kTest, payload);
  EXPECT_EQ(ch.recv_frame(Tag::kTest), payload);
  server.join();
  EXPECT_EQ(got, payload);
}

}  // namespace
}  // namespace seconnds
