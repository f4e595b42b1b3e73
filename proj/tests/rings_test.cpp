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

#include <filesystem>

#include "seconnds/errors.hpp"
#include "seconnds/rings.hpp"
#include "seconnds/tensor.hpp"
#include "support.hpp"

namespace seconnds {
namespace {

TEST(ShareSplit, ZeroWithZeroServerShare) {
  const Ring ring(8);
  auto [s0, s1] = share_split_with(ring, 0, 0);
  EXPECT_EQ(s0.value, 0u);
  EXPECT_EQ(s1.value, 0u);
}

TEST(ShareSplit, ModularIdentity) {
  const Ring ring(8);
  auto [s0, s1] = share_split_with(ring, 5, 200);
  EXPECT_EQ(s0.value, 200u);
  EXPECT_EQ(s1.value, 61u);
  EXPECT_EQ(reconstruct(ring, s0, s1), 5u);
}

TEST(ShareSplit, RandomReconstruction) {
  const Ring ring(37);
  auto prg = testing::test_prg();
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t x = ring.random(prg);
    auto [s0, s1] = share_split(ring, x, prg);
    ASSERT_EQ(reconstruct(ring, s0, s1), x);
  }
}

TEST(ShareSplit, RejectsOutOfRange) {
  const Ring ring(8);
  auto prg = testing::test_prg();
  EXPECT_THROW(share_split(ring, 256, prg), DomainError);
}

TEST(ShareSplit, ServerShareLooksUniform) {
  const Ring ring(4);
  auto prg = testing::test_prg(1);
  std::array<int, 16> hist{};
  const int n = 16000;
  for (int i = 0; i < n; ++i) ++hist[share_split(ring, 3, prg).first.value];
  double chi2 = 0;
  for (int h : hist) chi2 += (h - n / 16.0) * (h - n / 16.0) / (n / 16.0);
  EXPECT_LT(chi2, 37.7);  // 15 dof, p = 0.001
}

TEST(SignedView, Examples) {
  const Ring ring(8);
  EXPECT_EQ(ring.signed_view(5), 5);
  EXPECT_EQ(ring.signed_view(251), -5);
  EXPECT_EQ(ring.signed_view(128), -128);
  EXPECT_EQ(ring.signed_view(127), 127);
  EXPECT_THROW(ring.signed_view(256), DomainError);
}

TEST(Ring, AdditiveHomomorphism) {
  const Ring ring(37);
  auto prg = testing::test_prg(2);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t x = ring.random(prg), y = ring.random(prg);
    auto [x0, x1] = share_split(ring, x, prg);
    auto [y0, y1] = share_split(ring, y, prg);
    EXPECT_EQ(ring.add(ring.add(x0.value, y0.value), ring.add(x1.value, y1.value)),
              ring.add(x, y));
  }
}

TEST(Ring, MsbExhaustive) {
  for (unsigned b = 1; b <= 10; ++b) {
    const Ring ring(b);
    for (std::uint64_t x = 0; x < (1ULL << b); ++x) {
      ASSERT_EQ(ring.msb(x), x >= (1ULL << (b - 1))) << "b=" << b << " x=" << x;
    }
  }
}

TEST(Ring, WidthBounds) {
  EXPECT_THROW(Ring(0), DomainError);
  EXPECT_THROW(Ring(45), DomainError);
  EXPECT_NO_THROW(Ring(44));
  RingParams p;
  p.bits = 1;
  EXPECT_THROW(p.validate(), DomainError);
  p.bits = 8;
  p.scale = 8;
  EXPECT_THROW(p.validate(), DomainError);
}

TEST(Ring, ProductsMaskCorrectly) {
  const Ring ring(44);
  const std::uint64_t a = ring.mask(), b = ring.mask();
  EXPECT_EQ(ring.mul(a, b), 1u);  // (-1) * (-1)
}

TEST(QuantTensor, RoundTrip) {
  QuantTensor t({2, 3, 4}, 37, 12);
  auto prg = testing::test_prg(3);
  const Ring ring(37);
  for (auto& v : t.data) v = ring.random(prg);
  const Bytes enc = encode_tensor(t);
  EXPECT_EQ(std::string(enc.begin(), enc.begin() + 4), "SCNT");
  EXPECT_EQ(enc.size(), 4u + 2 + 1 + 1 + 1 + 3 * 4 + t.size() * 8);
  EXPECT_EQ(decode_tensor(enc), t);
  const auto path = std::filesystem::temp_directory_path() / "seconnds_rings_test.scnt";
  save_tensor(path, t);
  EXPECT_EQ(load_tensor(path), t);
  std::filesystem::remove(path);
}

TEST(QuantTensor, RejectsCorruption) {
  QuantTensor t({4}, 8, 0);
  t.data = {1, 2, 3, 4};
  Bytes enc = encode_tensor(t);
  Bytes bad_magic = enc;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_tensor(bad_magic), FormatError);
  Bytes bad_version = enc;
  bad_version[4] = 9;
  EXPECT_THROW(decode_tensor(bad_version), FormatError);
  Bytes truncated(enc.begin(), enc.end() - 1);
  EXPECT_THROW(decode_tensor(truncated), FormatError);
  t.data[0] = 256;
  EXPECT_THROW(t.validate(), ValidationError);
  QuantTensor wrong_len({3}, 8, 0);
  wrong_len.data = {1, 2};
  EXPECT_THROW(wrong_len.validate(), ValidationError);
}

}  // namespace
}  // namespace seconnds
