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

#include "seconnds/compare.hpp"
#include "support.hpp"

namespace seconnds {
namespace {

struct Pairs {
  std::vector<std::uint64_t> x, y;
};

Pairs all_pairs(unsigned bits) {
  Pairs p;
  const std::uint64_t n = 1ULL << bits;
  for (std::uint64_t x = 0; x < n; ++x) {
    for (std::uint64_t y = 0; y < n; ++y) {
      p.x.push_back(x);
      p.y.push_back(y);
    }
  }
  return p;
}

std::vector<std::uint8_t> run_mill(unsigned bits, bool greater, MillVariant v, const Pairs& p) {
  auto cfg = testing::test_config(37, v);
  auto [o0, o1] = testing::run_two(cfg, [&](Session& s) {
    return mill(s, Tag::kMill, bits, greater, s.is_server() ? p.x : p.y);
  });
  return reconstruct_bits(o0, o1);
}

TEST(MillLeaves, EqualZeroInputs) {
  auto cfg = testing::test_config();
  const std::vector<std::uint64_t> zero{0};
  auto [l0, l1] = testing::run_two(cfg, [&](Session& s) {
    return mill_leaves(s, Tag::kMill, 8, false, zero);
  });
  for (unsigned i = 0; i < 8; ++i) {
    EXPECT_EQ(l0.eq[i] ^ l1.eq[i], 1);
    EXPECT_EQ(l0.lg[i] ^ l1.lg[i], 0);
  }
}

TEST(MillLeaves, SingleBitGreater) {
  auto cfg = testing::test_config();
  auto [l0, l1] = testing::run_two(cfg, [&](Session& s) {
    const std::vector<std::uint64_t> in{s.is_server() ? 1u : 0u};
    return mill_leaves(s, Tag::kMill, 1, true, in);
  });
  EXPECT_EQ(l0.lg[0] ^ l1.lg[0], 1);
  EXPECT_EQ(l0.eq[0] ^ l1.eq[0], 0);
}

TEST(MillLeaves, ExhaustiveFourBits) {
  const auto p = all_pairs(4);
  for (bool greater : {false, true}) {
    auto cfg = testing::test_config();
    auto [l0, l1] = testing::run_two(cfg, [&](Session& s) {
      return mill_leaves(s, Tag::kMill, 4, greater, s.is_server() ? p.x : p.y);
    });
    for (std::size_t k = 0; k < p.x.size(); ++k) {
      for (unsigned i = 0; i < 4; ++i) {
        const unsigned xb = (p.x[k] >> i) & 1, yb = (p.y[k] >> i) & 1;
        ASSERT_EQ(l0.eq[k * 4 + i] ^ l1.eq[k * 4 + i], xb == yb);
        ASSERT_EQ(l0.lg[k * 4 + i] ^ l1.lg[k * 4 + i], greater ? xb > yb : xb < yb);
      }
    }
  }
}

class MillExhaustive : public ::testing::TestWithParam<std::tuple<unsigned, MillVariant>> {};

TEST_P(MillExhaustive, MatchesPlaintextComparison) {
  const auto [bits, v] = GetParam();
  const auto p = all_pairs(bits);
  for (bool greater : {false, true}) {
    const auto o = run_mill(bits, greater, v, p);
    for (std::size_t k = 0; k < o.size(); ++k) {
      ASSERT_EQ(o[k], greater ? p.x[k] > p.y[k] : p.x[k] < p.y[k])
          << "b=" << bits << " x=" << p.x[k] << " y=" << p.y[k];
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    SmallWidths, MillExhaustive,
    ::testing::Combine(::testing::Values(1u, 2u, 3u, 5u, 6u),
                       ::testing::Values(MillVariant::kLinear, MillVariant::kLogDepth)),
    [](const auto& info) {
      return "b" + std::to_string(std::get<0>(info.param)) + "_" + mill_variant_name(std::get<1>(info.param));
    });

TEST(Mill, EqualInputsGiveZero) {
  Pairs p;
  auto prg = testing::test_prg();
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t v = prg.next_bits(37);
    p.x.push_back(v);
    p.y.push_back(v);
  }
  for (auto v : {MillVariant::kLinear, MillVariant::kLogDepth}) {
    for (bool g : {false, true}) {
      for (auto o : run_mill(37, g, v, p)) ASSERT_EQ(o, 0);
    }
  }
}

TEST(Mill, VariantsAgreeOnRandomWideInputs) {
  for (unsigned bits : {16u, 32u, 37u}) {
    Pairs p;
    auto prg = testing::test_prg(bits);
    for (int i = 0; i < 100000; ++i) {
      p.x.push_back(prg.next_bits(bits));
      p.y.push_back(i % 7 == 0 ? p.x.back() ^ (1ULL << (i % bits)) : prg.next_bits(bits));
    }
    const auto lin = run_mill(bits, true, MillVariant::kLinear, p);
    const auto log = run_mill(bits, true, MillVariant::kLogDepth, p);
    for (std::size_t k = 0; k < lin.size(); ++k) {
      ASSERT_EQ(lin[k], p.x[k] > p.y[k]) << "b=" << bits;
      ASSERT_EQ(log[k], lin[k]) << "b=" << bits;
    }
  }
}

TEST(Mill, MeteredCountsMatchFormulas) {
  for (unsigned bits : {1u, 2u, 3u, 4u, 7u, 8u, 13u, 16u, 32u, 37u}) {
    for (auto v : {MillVariant::kLinear, MillVariant::kLogDepth}) {
      auto cfg = testing::test_config(37, v);
      const std::size_t k = 33;
      const std::vector<std::uint64_t> in(k, 1);
      auto [m0, m1] = testing::run_two(cfg, [&](Session& s) {
        mill(s, Tag::kMill, bits, true, in);
        return s.channel().meter().at(Tag::kMill);
      });
      EXPECT_EQ(m0.and_gates, k * mill_and_count(bits, v)) << bits;
      EXPECT_EQ(m0.triples_consumed, m0.and_gates);
      EXPECT_EQ(m0.rounds, mill_rounds(bits, v)) << bits;
      EXPECT_EQ(m0.rounds, m1.rounds);
      EXPECT_EQ(m0.bytes_sent, m1.bytes_received);
    }
  }
}

TEST(Mill, ClosedForms) {
  for (unsigned b = 1; b <= 44; ++b) {
    EXPECT_EQ(mill_and_count(b, MillVariant::kLinear), 2 * b - 1);
    EXPECT_EQ(mill_rounds(b, MillVariant::kLinear), b);
    EXPECT_EQ(mill_rounds(b, MillVariant::kLogDepth), 1 + ceil_log2(b));
  }
  for (unsigned b : {2u, 4u, 8u, 16u, 32u}) {
    EXPECT_EQ(mill_and_count(b, MillVariant::kLogDepth), b + (b - 1) + (b - 1 - ceil_log2(b)));
  }
  EXPECT_EQ(mill_and_count(1, MillVariant::kLogDepth), 1u);
}

}  // namespace
}  // namespace seconnds
