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

#include <cmath>

#include "seconnds/errors.hpp"
#include "seconnds/lattice.hpp"
#include "support.hpp"

namespace seconnds {
namespace {

std::vector<std::uint64_t> random_poly(std::size_t n, std::uint64_t q, Prg& prg) {
  std::vector<std::uint64_t> a(n);
  for (auto& x : a) x = prg.uniform(q);
  return a;
}

TEST(ModArith, Basics) {
  EXPECT_EQ(mul_mod(16, 16, 17), 1u);
  EXPECT_EQ(pow_mod(3, 16, 17), 1u);
  EXPECT_EQ(mul_mod(inv_mod(5, 17), 5, 17), 1u);
  EXPECT_THROW(inv_mod(0, 17), DomainError);
  EXPECT_TRUE(is_prime(17));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(561));
  EXPECT_TRUE(is_prime((1ULL << 61) - 1));
}

TEST(ModArith, NttPrimes) {
  const auto ps = find_ntt_primes(4096, 54, 2);
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_GT(ps[0], ps[1]);
  for (auto p : ps) {
    EXPECT_TRUE(is_prime(p));
    EXPECT_EQ(p % 8192, 1u);
    EXPECT_LT(p, 1ULL << 54);
    EXPECT_GE(p, 1ULL << 53);
  }
}

TEST(Ntt, ConstantPolynomialIsFlat) {
  NttTable t(8, 17);
  std::vector<std::uint64_t> a{5, 0, 0, 0, 0, 0, 0, 0};
  t.forward(a);
  for (auto x : a) EXPECT_EQ(x, 5u);
  t.inverse(a);
  EXPECT_EQ(a, (std::vector<std::uint64_t>{5, 0, 0, 0, 0, 0, 0, 0}));
}

TEST(Ntt, RejectsBadParameters) {
  EXPECT_THROW(NttTable(6, 13), DomainError);
  EXPECT_THROW(NttTable(8, 19), DomainError);
  EXPECT_THROW(NttTable(8, 33), DomainError);
}

TEST(Ntt, RoundTrip) {
  auto prg = testing::test_prg(1);
  for (std::size_t n : {8u, 1024u, 4096u}) {
    const auto q = find_ntt_primes(n, 54, 1)[0];
    NttTable t(n, q);
    for (int rep = 0; rep < 5; ++rep) {
      const auto a = random_poly(n, q, prg);
      auto b = a;
      t.forward(b);
      t.inverse(b);
      ASSERT_EQ(a, b) << "n=" << n;
    }
  }
}

std::vector<std::uint64_t> ntt_product(const NttTable& t, std::vector<std::uint64_t> a,
                                       std::vector<std::uint64_t> b) {
  t.forward(a);
  t.forward(b);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = mul_mod(a[i], b[i], t.q());
  t.inverse(a);
  return a;
}

TEST(Ntt, MatchesSchoolbookSmall) {
  NttTable t(8, 17);
  auto prg = testing::test_prg(2);
  for (int rep = 0; rep < 200; ++rep) {
    const auto a = random_poly(8, 17, prg);
    const auto b = random_poly(8, 17, prg);
    ASSERT_EQ(ntt_product(t, a, b), negacyclic_schoolbook(a, b, 17));
  }
}

TEST(Ntt, MatchesSchoolbookLarger) {
  auto prg = testing::test_prg(3);
  for (std::size_t n : {64u, 4096u}) {
    const auto q = find_ntt_primes(n, 54, 1)[0];
    NttTable t(n, q);
    const auto a = random_poly(n, q, prg);
    const auto b = random_poly(n, q, prg);
    EXPECT_EQ(ntt_product(t, a, b), negacyclic_schoolbook(a, b, q)) << "n=" << n;
  }
}

TEST(Ntt, XTimesXToTheNMinusOneIsMinusOne) {
  NttTable t(8, 17);
  std::vector<std::uint64_t> x{0, 1, 0, 0, 0, 0, 0, 0};
  std::vector<std::uint64_t> y{0, 0, 0, 0, 0, 0, 0, 1};
  EXPECT_EQ(ntt_product(t, x, y), (std::vector<std::uint64_t>{16, 0, 0, 0, 0, 0, 0, 0}));
}

class Rlwe : public ::testing::Test {
 protected:
  Rlwe() : ctx(RlweParams::make(37)), prg(testing::test_prg(10)), sk(ctx.keygen(prg)) {}

  std::vector<std::uint64_t> random_plain(std::size_t n) {
    std::vector<std::uint64_t> m(n);
    for (auto& x : m) x = prg.next_bits(37);
    return m;
  }

  RlweContext ctx;
  Prg prg;
  SecretKey sk;
};

TEST_F(Rlwe, Parameters) {
  const auto& p = ctx.params();
  EXPECT_EQ(p.n, 4096u);
  ASSERT_EQ(p.primes.size(), 2u);
  EXPECT_GT(p.log2_modulus(), 107.0);
  EXPECT_NO_THROW(p.validate());
  auto bad = p;
  bad.primes = {17};
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = p;
  bad.n = 1000;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST_F(Rlwe, EncryptZero) {
  const std::vector<std::uint64_t> zero(ctx.n(), 0);
  const auto ct = ctx.encrypt(sk, {}, prg);
  EXPECT_EQ(ctx.decrypt(ct, sk), zero);
  const auto pk = ctx.make_public_key(sk, prg);
  const auto z = ctx.encrypt_zero(pk, prg);
  EXPECT_EQ(z.domain(), Domain::kNtt);
  EXPECT_EQ(ctx.decrypt(z, sk), zero);
}

TEST_F(Rlwe, RoundTrips) {
  for (int rep = 0; rep < 1000; ++rep) {
    const auto m = random_plain(rep % 7 == 0 ? ctx.n() : 16);
    const auto ct = ctx.encrypt(sk, m, prg, rep % 2 == 0);
    const auto d = ctx.decrypt(ct, sk);
    for (std::size_t i = 0; i < m.size(); ++i) ASSERT_EQ(d[i], m[i]) << rep;
    for (std::size_t i = m.size(); i < d.size(); ++i) ASSERT_EQ(d[i], 0u) << rep;
  }
}

TEST_F(Rlwe, HomomorphicAddition) {
  const auto a = random_plain(ctx.n());
  const auto b = random_plain(ctx.n());
  auto ca = ctx.encrypt(sk, a, prg);
  ctx.add_inplace(ca, ctx.encrypt(sk, b, prg));
  EXPECT_FALSE(ca.seed.has_value());
  const auto d = ctx.decrypt(ca, sk);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(d[i], (a[i] + b[i]) & ctx.plain_mask());
  }
}

TEST_F(Rlwe, PlaintextProducts) {
  const auto m = random_plain(ctx.n());
  auto ct = ctx.encrypt(sk, m, prg);
  ctx.ct_to_ntt(ct);

  Poly one = ctx.encode_signed(std::vector<std::int64_t>{1});
  ctx.to_ntt(one, NttUse::kWeight);
  auto c1 = ct;
  ctx.mul_plain_inplace(c1, one);
  EXPECT_EQ(ctx.decrypt(c1, sk), m);

  Poly x = ctx.encode_signed(std::vector<std::int64_t>{0, 1});
  ctx.to_ntt(x, NttUse::kWeight);
  auto cx = ct;
  ctx.mul_plain_inplace(cx, x);
  const auto d = ctx.decrypt(cx, sk);
  EXPECT_EQ(d[0], (0 - m.back()) & ctx.plain_mask());
  for (std::size_t i = 1; i < m.size(); ++i) ASSERT_EQ(d[i], m[i - 1]);
}

TEST_F(Rlwe, MultiplyAccumulateChain) {
  // Eight terms with small signed weights on a few coefficients.
  const std::size_t n = ctx.n();
  Ciphertext acc{ctx.zero(Domain::kNtt), ctx.zero(Domain::kNtt), std::nullopt};
  std::vector<std::uint64_t> want(n, 0);
  const auto mask = ctx.plain_mask();
  for (int step = 0; step < 8; ++step) {
    const auto m = random_plain(n);
    std::vector<std::int64_t> w(4);
    for (auto& v : w) v = static_cast<std::int64_t>(prg.next_bits(8)) - 128;
    auto ct = ctx.encrypt(sk, m, prg);
    ctx.ct_to_ntt(ct);
    Poly pt = ctx.encode_signed(w);
    ctx.to_ntt(pt, NttUse::kWeight);
    ctx.mul_plain_acc(acc, ct, pt);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < w.size(); ++j) {
        const std::uint64_t wj = static_cast<std::uint64_t>(w[j]);
        if (i + j < n) {
          want[i + j] = (want[i + j] + m[i] * wj) & mask;
        } else {
          want[i + j - n] = (want[i + j - n] - m[i] * wj) & mask;
        }
      }
    }
  }
  EXPECT_EQ(ctx.decrypt(acc, sk), want);
}

TEST_F(Rlwe, MaskShiftsThePlaintext) {
  const auto m = random_plain(ctx.n());
  const auto r = random_plain(ctx.n());
  for (bool ntt : {false, true}) {
    auto ct = ctx.encrypt(sk, m, prg);
    if (ntt) ctx.ct_to_ntt(ct);
    ctx.mask_inplace(ct, r);
    const auto d = ctx.decrypt(ct, sk);
    for (std::size_t i = 0; i < m.size(); ++i) {
      ASSERT_EQ(d[i], (m[i] + r[i]) & ctx.plain_mask());
    }
  }
}

TEST_F(Rlwe, FloodingKeepsDecryption) {
  const auto m = random_plain(ctx.n());
  const auto pk = ctx.make_public_key(sk, prg);
  auto ct = ctx.encrypt(sk, m, prg);
  ctx.ct_to_ntt(ct);
  ctx.add_inplace(ct, ctx.encrypt_zero(pk, prg));
  ctx.ct_to_coeff(ct);
  ctx.flood_inplace(ct, prg);
  EXPECT_EQ(ctx.decrypt(ct, sk), m);
  EXPECT_GT(ctx.noise_bits(ct, sk, m), 55.0);
  EXPECT_GT(ctx.noise_budget_bits(ct, sk, m), 0.0);
}

TEST_F(Rlwe, FloodingNeedsCoefficients) {
  auto ct = ctx.encrypt(sk, random_plain(4), prg);
  ctx.ct_to_ntt(ct);
  EXPECT_THROW(ctx.flood_inplace(ct, prg), StateError);
}

TEST_F(Rlwe, FreshNoiseHasWideMargin) {
  const auto m = random_plain(ctx.n());
  const auto ct = ctx.encrypt(sk, m, prg);
  EXPECT_LT(ctx.noise_bits(ct, sk, m), 8.0);
  EXPECT_GT(ctx.noise_budget_bits(ct, sk, m), 50.0);
}

TEST_F(Rlwe, DecryptAtDetectsExcessNoise) {
  const auto m = random_plain(ctx.n());
  auto ct = ctx.encrypt(sk, m, prg);
  const std::vector<std::size_t> pos{0, 5, 4095};
  const auto d = ctx.decrypt_at(ct, sk, pos);
  EXPECT_EQ(d, (std::vector<std::uint64_t>{m[0], m[5], m[4095]}));
  // Add about 3/8 of delta to coefficient 0, as 2^e * c.
  const double log_delta = ctx.params().log2_modulus() - 37;
  const int e = static_cast<int>(log_delta) - 40;
  const auto c = static_cast<std::uint64_t>(std::exp2(log_delta + std::log2(0.375) - e));
  for (std::size_t j = 0; j < ctx.k(); ++j) {
    const auto q = ctx.params().primes[j];
    auto& v = ct.b.residue(j)[0];
    v = (v + mul_mod(pow_mod(2, static_cast<std::uint64_t>(e), q), c % q, q)) % q;
  }
  EXPECT_THROW(ctx.decrypt_at(ct, sk, pos), NoiseBudgetError);
  EXPECT_THROW(ctx.decrypt_at(ct, sk, std::vector<std::size_t>{4096}), DomainError);
}

TEST_F(Rlwe, SerializationRoundTrip) {
  const auto m = random_plain(ctx.n());
  const auto seeded = ctx.encrypt(sk, m, prg, true);
  const auto plain = ctx.encrypt(sk, m, prg, false);
  ASSERT_TRUE(seeded.seed.has_value());
  ASSERT_FALSE(plain.seed.has_value());

  const auto bs = ctx.serialize(seeded);
  const auto bp = ctx.serialize(plain);
  EXPECT_EQ(bs.size(), ctx.ciphertext_bytes(true));
  EXPECT_EQ(bp.size(), ctx.ciphertext_bytes(false));
  EXPECT_LT(bs.size() * 3, bp.size() * 2);

  const auto rs = ctx.deserialize(bs);
  const auto rp = ctx.deserialize(bp);
  EXPECT_EQ(rs.b, seeded.b);
  EXPECT_EQ(rs.a, seeded.a);
  EXPECT_EQ(rp.a, plain.a);
  EXPECT_EQ(ctx.decrypt(rs, sk), m);
  EXPECT_EQ(ctx.decrypt(rp, sk), m);

  auto ntt = plain;
  ctx.ct_to_ntt(ntt);
  const auto rn = ctx.deserialize(ctx.serialize(ntt));
  EXPECT_EQ(rn.domain(), Domain::kNtt);
  EXPECT_EQ(ctx.decrypt(rn, sk), m);

  const auto pk = ctx.make_public_key(sk, prg);
  const auto pk2 = ctx.deserialize_public_key(ctx.serialize(pk));
  EXPECT_EQ(ctx.decrypt(ctx.encrypt_zero(pk2, prg), sk), std::vector<std::uint64_t>(ctx.n(), 0));
}

TEST_F(Rlwe, DeserializationRejectsCorruption) {
  auto bytes = ctx.serialize(ctx.encrypt(sk, random_plain(8), prg, false));
  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_THROW(ctx.deserialize(truncated), FormatError);
  auto extra = bytes;
  extra.push_back(0);
  EXPECT_THROW(ctx.deserialize(extra), FormatError);
  auto wrong_params = bytes;
  wrong_params[0] ^= 1;
  EXPECT_THROW(ctx.deserialize(wrong_params), FormatError);
  auto out_of_range = bytes;
  for (std::size_t i = 10; i < 18; ++i) out_of_range[i] = 0xff;
  EXPECT_THROW(ctx.deserialize(out_of_range), FormatError);
}

TEST_F(Rlwe, WeightTransformsCountedSeparately) {
  const auto data0 = ctx.forward_ntt_count(NttUse::kData);
  const auto weight0 = ctx.forward_ntt_count(NttUse::kWeight);
  Poly p = ctx.encode_signed(std::vector<std::int64_t>{3});
  ctx.to_ntt(p, NttUse::kWeight);
  EXPECT_EQ(ctx.forward_ntt_count(NttUse::kWeight), weight0 + 1);
  EXPECT_EQ(ctx.forward_ntt_count(NttUse::kData), data0);
  EXPECT_THROW(ctx.to_ntt(p), StateError);
}

}  // namespace
}  // namespace seconnds
