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
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "seconnds/bytes.hpp"
#include "seconnds/crypto.hpp"

namespace seconnds {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t q);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t q);
bool is_prime(std::uint64_t n);

/// The `count` largest primes below 2^bits that are 1 mod 2n, descending.
std::vector<std::uint64_t> find_ntt_primes(std::size_t n, unsigned bits, std::size_t count);

/// Negacyclic NTT over Z_q[X]/(X^n + 1). The forward transform is
/// Cooley-Tukey with bit-reversed powers of a primitive 2n-th root psi and
/// leaves its output in bit-reversed order; the Gentleman-Sande inverse
/// consumes that order, so pointwise products need no reordering.
class NttTable {
 public:
  NttTable(std::size_t n, std::uint64_t q);

  std::size_t n() const { return n_; }
  std::uint64_t q() const { return q_; }
  std::uint64_t psi() const { return psi_; }

  void forward(std::span<std::uint64_t> a) const;
  void inverse(std::span<std::uint64_t> a) const;

 private:
  std::size_t n_;
  std::uint64_t q_;
  std::uint64_t psi_;
  std::uint64_t n_inv_;
  std::vector<std::uint64_t> psi_rev_;
  std::vector<std::uint64_t> psi_rev_shoup_;
  std::vector<std::uint64_t> psi_inv_rev_;
  std::vector<std::uint64_t> psi_inv_rev_shoup_;
};

/// Reference product modulo (X^n + 1, q), quadratic time.
std::vector<std::uint64_t> negacyclic_schoolbook(std::span<const std::uint64_t> a,
                                                 std::span<const std::uint64_t> b,
                                                 std::uint64_t q);

struct RlweParams {
  std::size_t n = 4096;
  std::vector<std::uint64_t> primes;
  unsigned plain_bits = 37;
  double sigma = 3.2;
  /// Standard deviation bound, in units of sigma, for rejecting error samples.
  double tail = 6.0;
  /// Uniform noise added to returned ciphertexts, in bits.
  unsigned flood_bits = 62;

  static RlweParams make(unsigned plain_bits = 37, std::size_t n = 4096,
                         unsigned prime_bits = 54, std::size_t count = 2);
  void validate() const;
  std::uint64_t hash() const;
  /// log2 of the product of the primes.
  double log2_modulus() const;
};

enum class Domain : std::uint8_t { kCoeff = 0, kNtt = 1 };

/// RNS polynomial: residue j occupies data[j * n, (j + 1) * n).
struct Poly {
  std::size_t n = 0;
  std::size_t k = 0;
  Domain domain = Domain::kCoeff;
  std::vector<std::uint64_t> data;

  Poly() = default;
  Poly(std::size_t n, std::size_t k, Domain d) : n(n), k(k), domain(d), data(n * k, 0) {}

  std::span<std::uint64_t> residue(std::size_t j) { return {data.data() + j * n, n}; }
  std::span<const std::uint64_t> residue(std::size_t j) const { return {data.data() + j * n, n}; }
  bool operator==(const Poly&) const = default;
};

using CtSeed = std::array<std::uint8_t, 32>;

/// Forward transforms are counted separately for ciphertext data and for
/// plaintext weights.
enum class NttUse : std::uint8_t { kData = 0, kWeight = 1 };

/// b = a * s + delta * m + e. When `seed` is set, a was expanded from it and
/// the ciphertext is in the coefficient domain.
struct Ciphertext {
  Poly a;
  Poly b;
  std::optional<CtSeed> seed;

  Domain domain() const { return b.domain; }
};

struct SecretKey {
  std::vector<std::int8_t> coeffs;
  Poly ntt;
};

/// An encryption of zero under the secret key, published for re-randomization.
struct PublicKey {
  Ciphertext ct;
};

class RlweContext {
 public:
  explicit RlweContext(RlweParams params);

  const RlweParams& params() const { return params_; }
  std::size_t n() const { return params_.n; }
  std::size_t k() const { return params_.primes.size(); }
  unsigned plain_bits() const { return params_.plain_bits; }
  std::uint64_t plain_mask() const { return (std::uint64_t{1} << params_.plain_bits) - 1; }
  const NttTable& table(std::size_t j) const { return tables_[j]; }

  void to_ntt(Poly& p, NttUse use = NttUse::kData) const;
  void to_coeff(Poly& p) const;
  std::uint64_t forward_ntt_count(NttUse use) const {
    return forward_ntts_[static_cast<std::size_t>(use)].load();
  }

  Poly zero(Domain d) const { return Poly(n(), k(), d); }
  /// Plaintext values in [0, 2^t) lifted as non-negative integers, times delta.
  Poly encode_scaled(std::span<const std::uint64_t> plain) const;
  /// Signed integers lifted into every residue, no scaling.
  Poly encode_signed(std::span<const std::int64_t> values) const;

  SecretKey keygen(Prg& prg) const;
  PublicKey make_public_key(const SecretKey& sk, Prg& prg) const;

  /// Symmetric encryption with a seeded a-part, coefficient domain.
  Ciphertext encrypt(const SecretKey& sk, std::span<const std::uint64_t> plain, Prg& prg,
                     bool compress_seed = true) const;
  /// Fresh encryption of zero under the public key, NTT domain.
  Ciphertext encrypt_zero(const PublicKey& pk, Prg& prg) const;

  std::vector<std::uint64_t> decrypt(const Ciphertext& ct, const SecretKey& sk) const;
  /// Decrypts only the listed coefficients; throws NoiseBudgetError when any of
  /// them carries noise above a quarter of delta.
  std::vector<std::uint64_t> decrypt_at(const Ciphertext& ct, const SecretKey& sk,
                                        std::span<const std::size_t> positions) const;
  /// log2 of the largest noise magnitude over all coefficients given the plaintext.
  double noise_bits(const Ciphertext& ct, const SecretKey& sk,
                    std::span<const std::uint64_t> plain) const;
  /// log2(delta / 2) minus the noise, i.e. the bits of headroom left.
  double noise_budget_bits(const Ciphertext& ct, const SecretKey& sk,
                           std::span<const std::uint64_t> plain) const;

  void add_inplace(Ciphertext& ct, const Ciphertext& other) const;
  /// Adds an already scaled plaintext (see encode_scaled) in the ciphertext's domain.
  void add_plain_inplace(Ciphertext& ct, const Poly& scaled) const;
  /// ct * pt with both in the NTT domain.
  void mul_plain_inplace(Ciphertext& ct, const Poly& pt_ntt) const;
  /// acc += ct * pt, all in the NTT domain.
  void mul_plain_acc(Ciphertext& acc, const Ciphertext& ct, const Poly& pt_ntt) const;
  /// Adds delta * r so that decryption yields m + r mod 2^t.
  void mask_inplace(Ciphertext& ct, std::span<const std::uint64_t> r) const;
  /// Adds uniform noise of params().flood_bits bits to the b-part (coefficient domain).
  void flood_inplace(Ciphertext& ct, Prg& prg) const;
  void ct_to_ntt(Ciphertext& ct) const;
  void ct_to_coeff(Ciphertext& ct) const;

  Bytes serialize(const Ciphertext& ct) const;
  Ciphertext deserialize(std::span<const std::uint8_t> data) const;
  Bytes serialize(const PublicKey& pk) const { return serialize(pk.ct); }
  PublicKey deserialize_public_key(std::span<const std::uint8_t> data) const {
    return PublicKey{deserialize(data)};
  }
  std::size_t ciphertext_bytes(bool seeded) const;

  /// Worst-case noise bound (log2) of a returned linear-layer ciphertext whose
  /// designated coefficients saw weights with the given l1 norm.
  double linear_noise_bound_bits(double weight_l1) const;
  /// Throws NoiseBudgetError when a layer with that l1 norm cannot decrypt reliably.
  void check_linear_budget(double weight_l1) const;

 private:
  Poly expand_a(const CtSeed& seed) const;
  void sample_error(Poly& p, Prg& prg) const;
  void sample_ternary(Poly& p, std::vector<std::int8_t>* out, Prg& prg) const;
  Poly phase(const Ciphertext& ct, const SecretKey& sk) const;

  RlweParams params_;
  std::vector<NttTable> tables_;
  std::vector<std::uint64_t> delta_mod_;  // floor(Q / 2^t) mod q_j
  mutable std::array<std::atomic<std::uint64_t>, 2> forward_ntts_{};
};

}  // namespace seconnds
