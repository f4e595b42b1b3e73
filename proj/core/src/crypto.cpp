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

#include "seconnds/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <cstring>

#include "seconnds/errors.hpp"

namespace seconnds {

namespace {

struct CtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter>;

void block_to_bytes(const Block& b, std::uint8_t* out) {
  std::memcpy(out, &b.lo, 8);
  std::memcpy(out + 8, &b.hi, 8);
}

CtxPtr make_ctx(const EVP_CIPHER* cipher, const Block& key, const std::uint8_t* iv) {
  CtxPtr ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw Error("EVP_CIPHER_CTX_new failed");
  std::uint8_t k[16];
  block_to_bytes(key, k);
  if (EVP_EncryptInit_ex(ctx.get(), cipher, nullptr, k, iv) != 1) {
    throw Error("AES key setup failed");
  }
  EVP_CIPHER_CTX_set_padding(ctx.get(), 0);
  return ctx;
}

}  // namespace

struct Prg::Impl {
  CtxPtr ctx;
};

Prg::Prg(Block seed, std::uint64_t stream) : impl_(std::make_unique<Impl>()) {
  std::uint8_t iv[16] = {};
  std::memcpy(iv, &stream, 8);
  impl_->ctx = make_ctx(EVP_aes_128_ctr(), seed, iv);
}

Prg::~Prg() = default;
Prg::Prg(Prg&&) noexcept = default;
Prg& Prg::operator=(Prg&&) noexcept = default;

Prg Prg::from_os() { return Prg(os_random_block()); }

void Prg::refill() {
  std::memset(buf_.data(), 0, buf_.size());
  int len = 0;
  if (EVP_EncryptUpdate(impl_->ctx.get(), buf_.data(), &len, buf_.data(),
                        static_cast<int>(buf_.size())) != 1) {
    throw Error("AES-CTR keystream generation failed");
  }
  pos_ = 0;
}

void Prg::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (pos_ == buf_.size()) refill();
    const std::size_t n = std::min(out.size() - done, buf_.size() - pos_);
    std::memcpy(out.data() + done, buf_.data() + pos_, n);
    pos_ += n;
    done += n;
  }
}

void Prg::fill_blocks(std::span<Block> out) {
  fill({reinterpret_cast<std::uint8_t*>(out.data()), out.size_bytes()});
}

std::uint64_t Prg::next_u64() {
  std::uint64_t v;
  fill({reinterpret_cast<std::uint8_t*>(&v), sizeof(v)});
  return v;
}

Block Prg::next_block() {
  Block b;
  fill_blocks({&b, 1});
  return b;
}

bool Prg::next_bit() {
  if (bits_left_ == 0) {
    bit_pool_ = next_u64();
    bits_left_ = 64;
  }
  const bool bit = (bit_pool_ & 1) != 0;
  bit_pool_ >>= 1;
  --bits_left_;
  return bit;
}

std::uint64_t Prg::next_bits(unsigned bits) {
  if (bits == 0) return 0;
  const std::uint64_t v = next_u64();
  return bits >= 64 ? v : (v & ((1ULL << bits) - 1));
}

std::uint64_t Prg::uniform(std::uint64_t bound) {
  if (bound == 0) throw DomainError("uniform: bound must be positive");
  const std::uint64_t limit = max() - (max() % bound);
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

Block os_random_block() {
  Block b;
  if (RAND_bytes(reinterpret_cast<unsigned char*>(&b), sizeof(b)) != 1) {
    throw Error("RAND_bytes failed");
  }
  return b;
}

struct FixedKeyAes::Impl {
  CtxPtr ctx;
};

FixedKeyAes::FixedKeyAes(Block key) : impl_(std::make_unique<Impl>()) {
  impl_->ctx = make_ctx(EVP_aes_128_ecb(), key, nullptr);
}

FixedKeyAes::~FixedKeyAes() = default;
FixedKeyAes::FixedKeyAes(FixedKeyAes&&) noexcept = default;
FixedKeyAes& FixedKeyAes::operator=(FixedKeyAes&&) noexcept = default;

void FixedKeyAes::permute(std::span<const Block> in, std::span<Block> out) const {
  if (in.size() != out.size()) throw DomainError("FixedKeyAes: size mismatch");
  // ECB without padding keeps no state between calls, so the context can be
  // reused from a const method.
  constexpr std::size_t kMaxChunk = 1 << 16;
  for (std::size_t off = 0; off < in.size(); off += kMaxChunk) {
    const std::size_t n = std::min(kMaxChunk, in.size() - off);
    int len = 0;
    if (EVP_EncryptUpdate(impl_->ctx.get(), reinterpret_cast<std::uint8_t*>(out.data() + off),
                          &len, reinterpret_cast<const std::uint8_t*>(in.data() + off),
                          static_cast<int>(n * sizeof(Block))) != 1) {
      throw Error("AES-ECB evaluation failed");
    }
  }
}

CrHash::CrHash(Block session_key) : perm_(session_key) {}

void CrHash::hash(std::span<const Block> in, std::uint64_t first_index,
                  std::span<Block> out) const {
  if (in.size() != out.size()) throw DomainError("CrHash: size mismatch");
  std::vector<Block> t(in.size());
  perm_.permute(in, t);
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = t[i] ^ Block{first_index + i, 0};
  }
  perm_.permute(out, out);
  for (std::size_t i = 0; i < in.size(); ++i) out[i] ^= t[i];
}

Block CrHash::hash_one(const Block& x, std::uint64_t index) const {
  Block out;
  hash({&x, 1}, index, {&out, 1});
  return out;
}

}  // namespace seconnds
