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

#include "seconnds/lattice.hpp"

#include <sodium.h>

#include <bit>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <random>

#include "seconnds/errors.hpp"

namespace seconnds {

using boost::multiprecision::uint256_t;
using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % q);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t q) {
  std::uint64_t r = 1 % q;
  a %= q;
  while (e) {
    if (e & 1) r = mul_mod(r, a, q);
    a = mul_mod(a, a, q);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t q) {
  // q is prime throughout.
  if (a % q == 0) throw DomainError("inv_mod: zero has no inverse");
  return pow_mod(a, q - 2, q);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> find_ntt_primes(std::size_t n, unsigned bits, std::size_t count) {
  if (bits < 3 || bits > 62) throw DomainError("prime size must be in [3, 62] bits");
  const std::uint64_t step = 2 * static_cast<std::uint64_t>(n);
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = ((std::uint64_t{1} << bits) - 2) / step; k > 0 && out.size() < count;
       --k) {
    const std::uint64_t q = k * step + 1;
    if (is_prime(q)) out.push_back(q);
  }
  if (out.size() < count) throw DomainError("not enough NTT-friendly primes");
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t shoup(std::uint64_t w, std::uint64_t q) {
  return static_cast<std::uint64_t>((static_cast<u128>(w) << 64) / q);
}

inline std::uint64_t mul_shoup(std::uint64_t a, std::uint64_t w, std::uint64_t ws,
                               std::uint64_t q) {
  const auto hi = static_cast<std::uint64_t>((static_cast<u128>(a) * ws) >> 64);
  std::uint64_t r = a * w - hi * q;
  return r >= q ? r - q : r;
}

inline std::uint64_t add_q(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  const std::uint64_t s = a + b;
  return s >= q ? s - q : s;
}

inline std::uint64_t sub_q(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return a >= b ? a - b : a + q - b;
}

std::size_t bit_reverse(std::size_t x, unsigned bits) {
  std::size_t r = 0;
  for (unsigned i = 0; i < bits; ++i) r |= ((x >> i) & 1) << (bits - 1 - i);
  return r;
}

}  // namespace

NttTable::NttTable(std::size_t n, std::uint64_t q) : n_(n), q_(q) {
  if (n < 2 || !std::has_single_bit(n)) throw DomainError("NTT size must be a power of two");
  if ((q - 1) % (2 * n) != 0 || !is_prime(q)) throw DomainError("q must be a prime 1 mod 2n");
  psi_ = 0;
  for (std::uint64_t g = 2; g < q; ++g) {
    const std::uint64_t c = pow_mod(g, (q - 1) / (2 * n), q);
    if (pow_mod(c, n, q) == q - 1) {
      psi_ = c;
      break;
    }
  }
  if (psi_ == 0) throw DomainError("no primitive 2n-th root of unity");
  const auto logn = static_cast<unsigned>(std::countr_zero(n));
  const std::uint64_t psi_inv = inv_mod(psi_, q);
  psi_rev_.resize(n);
  psi_inv_rev_.resize(n);
  psi_rev_shoup_.resize(n);
  psi_inv_rev_shoup_.resize(n);
  std::uint64_t p = 1, pi = 1;
  std::vector<std::uint64_t> pw(n), pwi(n);
  for (std::size_t i = 0; i < n; ++i) {
    pw[i] = p;
    pwi[i] = pi;
    p = mul_mod(p, psi_, q);
    pi = mul_mod(pi, psi_inv, q);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = bit_reverse(i, logn);
    psi_rev_[i] = pw[r];
    psi_inv_rev_[i] = pwi[r];
    psi_rev_shoup_[i] = shoup(psi_rev_[i], q);
    psi_inv_rev_shoup_[i] = shoup(psi_inv_rev_[i], q);
  }
  n_inv_ = inv_mod(n % q, q);
}

void NttTable::forward(std::span<std::uint64_t> a) const {
  const std::uint64_t q = q_;
  std::size_t t = n_;
  for (std::size_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j1 = 2 * i * t;
      const std::uint64_t w = psi_rev_[m + i];
      const std::uint64_t ws = psi_rev_shoup_[m + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const std::uint64_t u = a[j];
        const std::uint64_t v = mul_shoup(a[j + t], w, ws, q);
        a[j] = add_q(u, v, q);
        a[j + t] = sub_q(u, v, q);
      }
    }
  }
}

void NttTable::inverse(std::span<std::uint64_t> a) const {
  const std::uint64_t q = q_;
  std::size_t t = 1;
  for (std::size_t m = n_; m > 1; m >>= 1) {
    const std::size_t h = m >> 1;
    std::size_t j1 = 0;
    for (std::size_t i = 0; i < h; ++i) {
      const std::uint64_t w = psi_inv_rev_[h + i];
      const std::uint64_t ws = psi_inv_rev_shoup_[h + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const std::uint64_t u = a[j];
        const std::uint64_t v = a[j + t];
        a[j] = add_q(u, v, q);
        a[j + t] = mul_shoup(sub_q(u, v, q), w, ws, q);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  const std::uint64_t ns = shoup(n_inv_, q);
  for (auto& x : a) x = mul_shoup(x, n_inv_, ns, q);
}

std::vector<std::uint64_t> negacyclic_schoolbook(std::span<const std::uint64_t> a,
                                                 std::span<const std::uint64_t> b,
                                                 std::uint64_t q) {
  const std::size_t n = a.size();
  if (b.size() != n) throw DomainError("schoolbook: size mismatch");
  std::vector<std::uint64_t> c(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t p = mul_mod(a[i], b[j], q);
      const std::size_t k = i + j;
      if (k < n) {
        c[k] = add_q(c[k], p, q);
      } else {
        c[k - n] = sub_q(c[k - n], p, q);
      }
    }
  }
  return c;
}

// ---------------------------------------------------------------------------

RlweParams RlweParams::make(unsigned plain_bits, std::size_t n, unsigned prime_bits,
                            std::size_t count) {
  RlweParams p;
  p.n = n;
  p.plain_bits = plain_bits;
  p.primes = find_ntt_primes(n, prime_bits, count);
  p.validate();
  return p;
}

double RlweParams::log2_modulus() const {
  double s = 0;
  for (auto q : primes) s += std::log2(static_cast<double>(q));
  return s;
}

void RlweParams::validate() const {
  if (n < 2 || !std::has_single_bit(n)) throw ConfigError("RLWE degree must be a power of two");
  if (primes.empty()) throw ConfigError("RLWE modulus needs at least one prime");
  for (auto q : primes) {
    if (q >= (std::uint64_t{1} << 62) || (q - 1) % (2 * n) != 0 || !is_prime(q)) {
      throw ConfigError("RLWE prime is not NTT-friendly for this degree");
    }
  }
  if (plain_bits < 1 || plain_bits > 62) throw ConfigError("plaintext bits out of range");
  if (log2_modulus() < plain_bits + 8) throw ConfigError("RLWE modulus too small for plaintext");
}

std::uint64_t RlweParams::hash() const {
  ByteWriter w;
  w.u64(n);
  w.u32(plain_bits);
  for (auto q : primes) w.u64(q);
  w.u64(std::bit_cast<std::uint64_t>(sigma));
  w.u32(flood_bits);
  std::uint64_t h;
  crypto_generichash(reinterpret_cast<std::uint8_t*>(&h), sizeof(h), w.bytes().data(),
                     w.size(), nullptr, 0);
  return h;
}

namespace {

uint256_t modulus_product(const std::vector<std::uint64_t>& primes) {
  uint256_t q = 1;
  for (auto p : primes) q *= p;
  return q;
}

struct Crt {
  uint256_t q;
  std::vector<uint256_t> basis;       // Q / q_j
  std::vector<std::uint64_t> inv;     // (Q / q_j)^{-1} mod q_j

  explicit Crt(const std::vector<std::uint64_t>& primes) : q(modulus_product(primes)) {
    for (auto p : primes) {
      const uint256_t b = q / p;
      basis.push_back(b);
      inv.push_back(inv_mod(static_cast<std::uint64_t>(b % p), p));
    }
  }

  uint256_t compose(const Poly& p, std::size_t i, const std::vector<std::uint64_t>& primes) const {
    uint256_t v = 0;
    for (std::size_t j = 0; j < primes.size(); ++j) {
      v += basis[j] * mul_mod(p.data[j * p.n + i], inv[j], primes[j]);
    }
    return v % q;
  }
};

}  // namespace

RlweContext::RlweContext(RlweParams params) : params_(std::move(params)) {
  params_.validate();
  for (auto q : params_.primes) tables_.emplace_back(params_.n, q);
  const uint256_t delta = modulus_product(params_.primes) >> params_.plain_bits;
  for (auto q : params_.primes) delta_mod_.push_back(static_cast<std::uint64_t>(delta % q));
}

void RlweContext::to_ntt(Poly& p, NttUse use) const {
  if (p.domain != Domain::kCoeff) throw StateError("to_ntt: polynomial already in NTT form");
  for (std::size_t j = 0; j < k(); ++j) tables_[j].forward(p.residue(j));
  p.domain = Domain::kNtt;
  forward_ntts_[static_cast<std::size_t>(use)].fetch_add(1);
}

void RlweContext::to_coeff(Poly& p) const {
  if (p.domain != Domain::kNtt) throw StateError("to_coeff: polynomial not in NTT form");
  for (std::size_t j = 0; j < k(); ++j) tables_[j].inverse(p.residue(j));
  p.domain = Domain::kCoeff;
}

Poly RlweContext::encode_scaled(std::span<const std::uint64_t> plain) const {
  if (plain.size() > n()) throw DomainError("plaintext longer than the ring degree");
  Poly p = zero(Domain::kCoeff);
  for (std::size_t j = 0; j < k(); ++j) {
    const std::uint64_t q = params_.primes[j];
    auto r = p.residue(j);
    for (std::size_t i = 0; i < plain.size(); ++i) r[i] = mul_mod(plain[i] % q, delta_mod_[j], q);
  }
  return p;
}

Poly RlweContext::encode_signed(std::span<const std::int64_t> values) const {
  if (values.size() > n()) throw DomainError("plaintext longer than the ring degree");
  Poly p = zero(Domain::kCoeff);
  for (std::size_t j = 0; j < k(); ++j) {
    const std::uint64_t q = params_.primes[j];
    auto r = p.residue(j);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const std::int64_t v = values[i];
      const std::uint64_t mag = static_cast<std::uint64_t>(v < 0 ? -v : v) % q;
      r[i] = (v < 0 && mag) ? q - mag : mag;
    }
  }
  return p;
}

Poly RlweContext::expand_a(const CtSeed& seed) const {
  Block key;
  crypto_generichash(reinterpret_cast<std::uint8_t*>(&key), sizeof(key), seed.data(), seed.size(),
                     nullptr, 0);
  Prg prg(key, 0xA);
  Poly a = zero(Domain::kCoeff);
  for (std::size_t j = 0; j < k(); ++j) {
    for (auto& x : a.residue(j)) x = prg.uniform(params_.primes[j]);
  }
  return a;
}

void RlweContext::sample_error(Poly& p, Prg& prg) const {
  std::normal_distribution<double> dist(0.0, params_.sigma);
  const double bound = params_.tail * params_.sigma;
  std::vector<std::int64_t> e(n());
  for (auto& x : e) {
    double v;
    do {
      v = dist(prg);
    } while (std::abs(v) > bound);
    x = std::llround(v);
  }
  const Poly ep = encode_signed(e);
  for (std::size_t i = 0; i < p.data.size(); ++i) {
    p.data[i] = add_q(p.data[i], ep.data[i], params_.primes[i / n()]);
  }
}

void RlweContext::sample_ternary(Poly& p, std::vector<std::int8_t>* out, Prg& prg) const {
  std::vector<std::int64_t> v(n());
  for (auto& x : v) x = static_cast<std::int64_t>(prg.uniform(3)) - 1;
  if (out) out->assign(v.begin(), v.end());
  p = encode_signed(v);
}

SecretKey RlweContext::keygen(Prg& prg) const {
  SecretKey sk;
  sample_ternary(sk.ntt, &sk.coeffs, prg);
  to_ntt(sk.ntt);
  return sk;
}

namespace {

void pointwise_acc(Poly& acc, const Poly& x, const Poly& y, const std::vector<std::uint64_t>& q) {
  for (std::size_t i = 0; i < acc.data.size(); ++i) {
    const std::uint64_t qi = q[i / acc.n];
    acc.data[i] = add_q(acc.data[i], mul_mod(x.data[i], y.data[i], qi), qi);
  }
}

void add_poly(Poly& acc, const Poly& x, const std::vector<std::uint64_t>& q) {
  if (acc.domain != x.domain) throw StateError("polynomial domain mismatch");
  for (std::size_t i = 0; i < acc.data.size(); ++i) {
    acc.data[i] = add_q(acc.data[i], x.data[i], q[i / acc.n]);
  }
}

}  // namespace

Ciphertext RlweContext::encrypt(const SecretKey& sk, std::span<const std::uint64_t> plain,
                                Prg& prg, bool compress_seed) const {
  CtSeed seed;
  prg.fill(seed);
  Ciphertext ct;
  ct.a = expand_a(seed);
  Poly as = ct.a;
  to_ntt(as);
  Poly prod = zero(Domain::kNtt);
  pointwise_acc(prod, as, sk.ntt, params_.primes);
  to_coeff(prod);
  ct.b = encode_scaled(plain);
  sample_error(ct.b, prg);
  add_poly(ct.b, prod, params_.primes);
  if (compress_seed) ct.seed = seed;
  return ct;
}

PublicKey RlweContext::make_public_key(const SecretKey& sk, Prg& prg) const {
  const std::vector<std::uint64_t> zeros;
  return PublicKey{encrypt(sk, zeros, prg, true)};
}

Ciphertext RlweContext::encrypt_zero(const PublicKey& pk, Prg& prg) const {
  Ciphertext key = pk.ct;
  if (key.domain() == Domain::kCoeff) ct_to_ntt(key);
  Poly u;
  sample_ternary(u, nullptr, prg);
  to_ntt(u);
  Ciphertext ct;
  ct.a = zero(Domain::kCoeff);
  ct.b = zero(Domain::kCoeff);
  sample_error(ct.a, prg);
  sample_error(ct.b, prg);
  to_ntt(ct.a);
  to_ntt(ct.b);
  pointwise_acc(ct.a, key.a, u, params_.primes);
  pointwise_acc(ct.b, key.b, u, params_.primes);
  return ct;
}

Poly RlweContext::phase(const Ciphertext& ct, const SecretKey& sk) const {
  Poly a = ct.a;
  Poly b = ct.b;
  if (a.domain == Domain::kCoeff) to_ntt(a);
  if (b.domain == Domain::kCoeff) to_ntt(b);
  for (std::size_t i = 0; i < b.data.size(); ++i) {
    const std::uint64_t q = params_.primes[i / n()];
    b.data[i] = sub_q(b.data[i], mul_mod(a.data[i], sk.ntt.data[i], q), q);
  }
  to_coeff(b);
  return b;
}

namespace {

struct Decoded {
  std::uint64_t m;
  uint256_t noise;  // |phase - delta * m| centered mod Q
};

Decoded decode(const uint256_t& v, const uint256_t& q, const uint256_t& delta, unsigned t_bits,
               std::uint64_t t_mask) {
  const uint256_t scaled = ((v << t_bits) + q / 2) / q;
  const auto m = static_cast<std::uint64_t>(scaled & t_mask);
  const uint256_t expect = (delta * m) % q;
  uint256_t diff = v >= expect ? v - expect : expect - v;
  if (diff > q / 2) diff = q - diff;
  return {m, diff};
}

double log2_u256(const uint256_t& x) {
  if (x == 0) return 0.0;
  return static_cast<double>(boost::multiprecision::msb(x)) + 1.0;
}

}  // namespace

std::vector<std::uint64_t> RlweContext::decrypt(const Ciphertext& ct, const SecretKey& sk) const {
  const Poly ph = phase(ct, sk);
  const Crt crt(params_.primes);
  const uint256_t delta = crt.q >> plain_bits();
  std::vector<std::uint64_t> out(n());
  for (std::size_t i = 0; i < n(); ++i) {
    out[i] = decode(crt.compose(ph, i, params_.primes), crt.q, delta, plain_bits(), plain_mask()).m;
  }
  return out;
}

std::vector<std::uint64_t> RlweContext::decrypt_at(const Ciphertext& ct, const SecretKey& sk,
                                                   std::span<const std::size_t> positions) const {
  const Poly ph = phase(ct, sk);
  const Crt crt(params_.primes);
  const uint256_t delta = crt.q >> plain_bits();
  const uint256_t limit = delta / 4;
  std::vector<std::uint64_t> out;
  out.reserve(positions.size());
  for (auto i : positions) {
    if (i >= n()) throw DomainError("decrypt_at: coefficient index out of range");
    const auto d = decode(crt.compose(ph, i, params_.primes), crt.q, delta, plain_bits(),
                          plain_mask());
    if (d.noise > limit) throw NoiseBudgetError("ciphertext noise exceeds the decryption margin");
    out.push_back(d.m);
  }
  return out;
}

double RlweContext::noise_bits(const Ciphertext& ct, const SecretKey& sk,
                               std::span<const std::uint64_t> plain) const {
  const Poly ph = phase(ct, sk);
  const Crt crt(params_.primes);
  const uint256_t delta = crt.q >> plain_bits();
  uint256_t worst = 0;
  for (std::size_t i = 0; i < n(); ++i) {
    const uint256_t v = crt.compose(ph, i, params_.primes);
    const std::uint64_t m = i < plain.size() ? plain[i] & plain_mask() : 0;
    const uint256_t expect = (delta * m) % crt.q;
    uint256_t diff = v >= expect ? v - expect : expect - v;
    if (diff > crt.q / 2) diff = crt.q - diff;
    if (diff > worst) worst = diff;
  }
  return log2_u256(worst);
}

double RlweContext::noise_budget_bits(const Ciphertext& ct, const SecretKey& sk,
                                      std::span<const std::uint64_t> plain) const {
  return (params_.log2_modulus() - plain_bits() - 1) - noise_bits(ct, sk, plain);
}

void RlweContext::add_inplace(Ciphertext& ct, const Ciphertext& other) const {
  add_poly(ct.a, other.a, params_.primes);
  add_poly(ct.b, other.b, params_.primes);
  ct.seed.reset();
}

void RlweContext::add_plain_inplace(Ciphertext& ct, const Poly& scaled) const {
  add_poly(ct.b, scaled, params_.primes);
}

void RlweContext::mul_plain_inplace(Ciphertext& ct, const Poly& pt_ntt) const {
  if (ct.domain() != Domain::kNtt || pt_ntt.domain != Domain::kNtt || ct.a.domain != Domain::kNtt) {
    throw StateError("plaintext multiply needs NTT-domain operands");
  }
  for (std::size_t i = 0; i < ct.b.data.size(); ++i) {
    const std::uint64_t q = params_.primes[i / n()];
    ct.a.data[i] = mul_mod(ct.a.data[i], pt_ntt.data[i], q);
    ct.b.data[i] = mul_mod(ct.b.data[i], pt_ntt.data[i], q);
  }
  ct.seed.reset();
}

void RlweContext::mul_plain_acc(Ciphertext& acc, const Ciphertext& ct, const Poly& pt_ntt) const {
  if (acc.domain() != Domain::kNtt || ct.domain() != Domain::kNtt ||
      pt_ntt.domain != Domain::kNtt) {
    throw StateError("plaintext multiply needs NTT-domain operands");
  }
  pointwise_acc(acc.a, ct.a, pt_ntt, params_.primes);
  pointwise_acc(acc.b, ct.b, pt_ntt, params_.primes);
  acc.seed.reset();
}

void RlweContext::mask_inplace(Ciphertext& ct, std::span<const std::uint64_t> r) const {
  Poly p = encode_scaled(r);
  if (ct.domain() == Domain::kNtt) to_ntt(p);
  add_poly(ct.b, p, params_.primes);
}

void RlweContext::flood_inplace(Ciphertext& ct, Prg& prg) const {
  if (ct.domain() != Domain::kCoeff) throw StateError("noise flooding works on coefficients");
  const unsigned fb = params_.flood_bits;
  const std::uint64_t span = std::uint64_t{1} << fb;
  std::vector<std::int64_t> noise(n());
  for (auto& x : noise) {
    x = static_cast<std::int64_t>(prg.next_bits(fb + 1)) - static_cast<std::int64_t>(span);
  }
  add_poly(ct.b, encode_signed(noise), params_.primes);
}

void RlweContext::ct_to_ntt(Ciphertext& ct) const {
  to_ntt(ct.a);
  to_ntt(ct.b);
  ct.seed.reset();
}

void RlweContext::ct_to_coeff(Ciphertext& ct) const {
  to_coeff(ct.a);
  to_coeff(ct.b);
}

std::size_t RlweContext::ciphertext_bytes(bool seeded) const {
  const std::size_t poly = k() * n() * 8;
  return 10 + (seeded ? 32 : poly) + poly;
}

Bytes RlweContext::serialize(const Ciphertext& ct) const {
  if (ct.a.domain != ct.b.domain) throw StateError("ciphertext halves in different domains");
  if (ct.seed && ct.domain() != Domain::kCoeff) throw StateError("seeded ciphertext must be in coefficient form");
  ByteWriter w(ciphertext_bytes(ct.seed.has_value()));
  w.u64(params_.hash());
  w.u8(static_cast<std::uint8_t>(ct.domain()));
  w.u8(ct.seed ? 1 : 0);
  if (ct.seed) {
    w.raw(*ct.seed);
  } else {
    w.u64s(ct.a.data);
  }
  w.u64s(ct.b.data);
  return w.take();
}

Ciphertext RlweContext::deserialize(std::span<const std::uint8_t> data) const {
  ByteReader r(data);
  if (r.u64() != params_.hash()) throw FormatError("ciphertext parameter hash mismatch");
  const std::uint8_t dom = r.u8();
  const std::uint8_t seeded = r.u8();
  if (dom > 1 || seeded > 1) throw FormatError("bad ciphertext header");
  const auto domain = static_cast<Domain>(dom);
  if (seeded && domain != Domain::kCoeff) throw FormatError("seeded ciphertext must be in coefficient form");
  Ciphertext ct;
  auto read_poly = [&](Poly& p) {
    p = zero(domain);
    r.u64s(p.data);
    for (std::size_t i = 0; i < p.data.size(); ++i) {
      if (p.data[i] >= params_.primes[i / n()]) throw FormatError("ciphertext residue out of range");
    }
  };
  if (seeded) {
    CtSeed seed;
    const auto s = r.raw(seed.size());
    std::copy(s.begin(), s.end(), seed.begin());
    ct.a = expand_a(seed);
    ct.seed = seed;
  } else {
    read_poly(ct.a);
  }
  read_poly(ct.b);
  if (!r.done()) throw FormatError("trailing bytes after ciphertext");
  return ct;
}

double RlweContext::linear_noise_bound_bits(double weight_l1) const {
  const double e = params_.tail * params_.sigma;
  const double t = std::ldexp(1.0, static_cast<int>(plain_bits()));
  const double l1 = std::max(weight_l1, 1.0);
  const double bound = e * l1                                  // fresh noise times weights
                       + 2.0 * t * l1                          // plaintext overflow past 2^t
                       + e * (2.0 * static_cast<double>(n()) + 1.0)  // re-randomization
                       + std::ldexp(1.0, static_cast<int>(params_.flood_bits));
  return std::log2(bound);
}

void RlweContext::check_linear_budget(double weight_l1) const {
  const double limit = params_.log2_modulus() - plain_bits() - 2;
  if (linear_noise_bound_bits(weight_l1) >= limit) {
    throw NoiseBudgetError("layer weights too large for the RLWE noise budget");
  }
}

}  // namespace seconnds
