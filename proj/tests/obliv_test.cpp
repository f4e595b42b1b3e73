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

#include <set>

#include "seconnds/errors.hpp"
#include "seconnds/obliv.hpp"
#include "support.hpp"

namespace seconnds {
namespace {

std::vector<std::uint8_t> random_bits(std::size_t n, Prg& prg) {
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = prg.next_bit();
  return v;
}

TEST(BaseOt, ReceiverGetsChosenString) {
  auto prg = testing::test_prg();
  const auto choices = random_bits(kOtSecurityParam, prg);
  auto [snd, rcv] = run_pair(
      [&](Channel& ch) {
        Prg p(Block{1, 2}, 0);
        return base_ot_send(ch, p);
      },
      [&](Channel& ch) {
        Prg p(Block{3, 4}, 0);
        return base_ot_recv(ch, p, choices);
      });
  ASSERT_EQ(snd.size(), kOtSecurityParam);
  ASSERT_EQ(rcv.size(), kOtSecurityParam);
  for (std::size_t i = 0; i < kOtSecurityParam; ++i) {
    EXPECT_EQ(rcv.rc[i], choices[i] ? snd.r1[i] : snd.r0[i]) << i;
    EXPECT_NE(rcv.rc[i], choices[i] ? snd.r0[i] : snd.r1[i]) << i;
  }
}

TEST(BaseOt, FixedSeedsReproduceAndDifferentSessionsDiffer) {
  const std::vector<std::uint8_t> choices(kOtSecurityParam, 1);
  auto session = [&](std::uint64_t seed) {
    return run_pair(
        [&](Channel& ch) {
          Prg p(Block{seed, 1}, 0);
          return base_ot_send(ch, p);
        },
        [&](Channel& ch) {
          Prg p(Block{seed, 2}, 0);
          return base_ot_recv(ch, p, choices);
        });
  };
  const auto a = session(10), b = session(10), c = session(11);
  EXPECT_EQ(a.first.r0, b.first.r0);
  EXPECT_EQ(a.first.r1, b.first.r1);
  std::set<std::pair<std::uint64_t, std::uint64_t>> pads;
  for (const auto* v : {&a.first.r0, &a.first.r1}) {
    for (const auto& x : *v) pads.insert({x.lo, x.hi});
  }
  for (const auto* v : {&c.first.r0, &c.first.r1}) {
    for (const auto& x : *v) EXPECT_EQ(pads.count({x.lo, x.hi}), 0u);
  }
}

TEST(BaseOt, RejectsInvalidGroupElement) {
  EXPECT_THROW(run_pair(
                   [&](Channel& ch) {
                     ch.send_frame(Tag::kBaseOt, Bytes(32, 0xff), PayloadClass::kOtMessage);
                     return 0;
                   },
                   [&](Channel& ch) {
                     Prg p(Block{3, 4}, 0);
                     const std::vector<std::uint8_t> choices(kOtSecurityParam, 0);
                     base_ot_recv(ch, p, choices);
                     return 0;
                   }),
               HandshakeError);
}

TEST(Transpose, MatchesNaiveBitTranspose) {
  auto prg = testing::test_prg(1);
  for (std::size_t n : {64u, 128u, 640u, 4096u}) {
    const std::size_t words = n / 64;
    std::vector<std::uint64_t> cols(128 * words);
    for (auto& w : cols) w = prg.next_u64();
    const auto rows = transpose_columns(cols, n);
    ASSERT_EQ(rows.size(), n);
    for (std::size_t r = 0; r < n; ++r) {
      for (unsigned c = 0; c < 128; ++c) {
        const bool want = (cols[c * words + r / 64] >> (r % 64)) & 1;
        ASSERT_EQ(rows[r].bit(c), want) << "n=" << n << " r=" << r << " c=" << c;
      }
    }
  }
}

struct IknpPair {
  RcCotSender s;
  RcCotReceiver r;
  std::size_t u_bytes = 0;
};

IknpPair iknp_run(std::size_t n) {
  auto [s, r] = run_pair(
      [&](Channel& ch) {
        Prg p(Block{5, 6}, 0);
        IknpSender snd;
        snd.setup(ch, p);
        const auto before = ch.meter_snapshot();
        auto out = snd.extend(ch, n);
        return std::make_pair(out, ch.meter_snapshot().total().bytes_received -
                                       before.total().bytes_received);
      },
      [&](Channel& ch) {
        Prg p(Block{7, 8}, 0);
        IknpReceiver rcv;
        rcv.setup(ch, p);
        return rcv.extend(ch, p, n);
      });
  return {s.first, r, s.second};
}

TEST(Iknp, CorrelationHolds) {
  for (std::size_t n : {1u, 1024u}) {
    const auto run = iknp_run(n);
    ASSERT_EQ(run.s.size(), n);
    ASSERT_EQ(run.r.size(), n);
    for (std::size_t i = 0; i < n; ++i) {
      const Block want = run.r.choice[i] ? (run.s.m[i] ^ run.s.delta) : run.s.m[i];
      ASSERT_EQ(run.r.mc[i], want) << "n=" << n << " i=" << i;
    }
  }
}

TEST(Iknp, TrafficIsOneBlockPerInstance) {
  const auto run = iknp_run(8192);
  const double per = static_cast<double>(run.u_bytes) / 8192.0;
  EXPECT_GE(per, 16.0);
  EXPECT_LE(run.u_bytes, 8192u * 16 + 64);
  EXPECT_EQ(iknp_payload_bytes(8192), 8192u * 16);
}

TEST(Iknp, ExtendBeforeSetupIsStateError) {
  IknpSender s;
  EXPECT_THROW(s.consume(1, Bytes(16)), StateError);
}

TEST(RotFromCot, HashesAgreeAndBreakCorrelation) {
  const auto run = iknp_run(512);
  const CrHash hash(Block{42, 43});
  const auto s = rot_from_cot(run.s, hash);
  const auto r = rot_from_cot(run.r, hash);
  for (std::size_t i = 0; i < 512; ++i) {
    ASSERT_EQ(r.rc[i], r.choice[i] ? s.r1[i] : s.r0[i]);
    ASSERT_NE(s.r0[i] ^ s.r1[i], run.s.delta);
  }
}

TEST(RotFromCot, IndexSeparatesIdenticalInputs) {
  RcCotSender batch;
  batch.delta = Block{1, 0};
  batch.m = {Block{9, 9}, Block{9, 9}};
  const CrHash hash(Block{1, 1});
  const auto v = rot_from_cot(batch, hash);
  EXPECT_NE(v.r0[0], v.r0[1]);
  EXPECT_NE(v.r1[0], v.r1[1]);
}

TEST(RotFromCot, Avalanche) {
  const CrHash hash(Block{1, 1});
  auto prg = testing::test_prg(3);
  for (int t = 0; t < 100; ++t) {
    const Block x = prg.next_block();
    Block y = x;
    y.lo ^= 1ULL << (t % 64);
    const Block hx = hash.hash_one(x, 7), hy = hash.hash_one(y, 7);
    EXPECT_NE(hx, hy);
    const int flipped = std::popcount(hx.lo ^ hy.lo) + std::popcount(hx.hi ^ hy.hi);
    EXPECT_GT(flipped, 32);
    EXPECT_LT(flipped, 96);
  }
}

class CotTest : public ::testing::TestWithParam<TripleBackend> {};

TEST_P(CotTest, CorrelationInvariant) {
  auto cfg = testing::test_config(8, MillVariant::kLinear, GetParam());
  const Ring ring(8);
  auto prg = testing::test_prg(4);
  const std::size_t n = 10000;
  std::vector<std::uint64_t> deltas(n);
  std::vector<std::uint8_t> choices(n);
  for (std::size_t i = 0; i < n; ++i) {
    deltas[i] = ring.random(prg);
    choices[i] = prg.next_bit();
  }
  deltas[0] = 0;
  choices[0] = 1;
  deltas[1] = 10;
  choices[1] = 1;
  auto [ms, mr] = testing::run_two(cfg, [&](Session& s) {
    if (s.is_server()) {
      return cot_send(s.channel(), s.cot_engine(), s.prg(Stream::kCot), Tag::kCot, ring, deltas);
    }
    return cot_recv(s.channel(), s.cot_engine(), s.prg(Stream::kCot), Tag::kCot, ring, choices);
  });
  for (std::size_t i = 0; i < n; ++i) {
    ASSERT_EQ(ring.sub(mr[i], ms[i]), choices[i] ? deltas[i] : 0) << i;
  }
  EXPECT_EQ(ring.sub(mr[1], ms[1]), 10u);
  EXPECT_EQ(mr[0], ms[0]);
}

TEST_P(CotTest, ExchangeBothDirections) {
  auto cfg = testing::test_config(37, MillVariant::kLinear, GetParam());
  const Ring ring(37);
  const std::size_t n = 2000;
  std::array<std::vector<std::uint64_t>, 2> deltas;
  std::array<std::vector<std::uint8_t>, 2> choices;
  auto prg = testing::test_prg(5);
  for (int p = 0; p < 2; ++p) {
    for (std::size_t i = 0; i < n; ++i) {
      deltas[p].push_back(ring.random(prg));
      choices[p].push_back(prg.next_bit());
    }
  }
  auto [r0, r1] = testing::run_two(cfg, [&](Session& s) {
    const int p = s.is_server() ? 0 : 1;
    const auto before = s.channel().meter_snapshot();
    auto out = cot_exchange(s.channel(), s.cot_engine(), s.prg(Stream::kCot), Tag::kCot, ring,
                            deltas[p], choices[p]);
    return std::make_pair(out, s.channel().meter().at(Tag::kCot).rounds -
                                   before.at(Tag::kCot).rounds);
  });
  for (std::size_t i = 0; i < n; ++i) {
    ASSERT_EQ(ring.sub(r1.first.m_r[i], r0.first.m_s[i]), choices[1][i] ? deltas[0][i] : 0);
    ASSERT_EQ(ring.sub(r0.first.m_r[i], r1.first.m_s[i]), choices[0][i] ? deltas[1][i] : 0);
  }
  EXPECT_EQ(r0.second, 2u);
}

INSTANTIATE_TEST_SUITE_P(Backends, CotTest,
                         ::testing::Values(TripleBackend::kIknp, TripleBackend::kDealer),
                         [](const auto& info) { return std::string(triple_backend_name(info.param)); });

TEST(OtEngine, PoolsMirrorAcrossParties) {
  auto cfg = testing::test_config(37, MillVariant::kLinear, TripleBackend::kIknp);
  auto [a, b] = testing::run_two(cfg, [&](Session& s) {
    s.prefill_cots(5000);
    return std::make_pair(s.cot_engine().available_send(), s.cot_engine().available_recv());
  });
  EXPECT_EQ(a.first, b.second);
  EXPECT_EQ(a.second, b.first);
  EXPECT_GE(a.first, 5000u);
}

}  // namespace
}  // namespace seconnds
