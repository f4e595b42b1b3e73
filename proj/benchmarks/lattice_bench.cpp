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

#include <benchmark/benchmark.h>

#include "seconnds/lattice.hpp"
#include "seconnds/linconv.hpp"

namespace seconnds {
namespace {

void BM_NttForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto q = find_ntt_primes(n, 54, 1)[0];
  const NttTable t(n, q);
  Prg prg(Block{1, 1});
  std::vector<std::uint64_t> a(n);
  for (auto& x : a) x = prg.uniform(q);
  for (auto _ : state) {
    t.forward(a);
    benchmark::DoNotOptimize(a.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NttForward)->Arg(1024)->Arg(4096)->Arg(8192);

void BM_NttInverse(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto q = find_ntt_primes(n, 54, 1)[0];
  const NttTable t(n, q);
  Prg prg(Block{1, 2});
  std::vector<std::uint64_t> a(n);
  for (auto& x : a) x = prg.uniform(q);
  for (auto _ : state) {
    t.inverse(a);
    benchmark::DoNotOptimize(a.data());
  }
}
BENCHMARK(BM_NttInverse)->Arg(4096);

void BM_Encrypt(benchmark::State& state) {
  const RlweContext ctx(RlweParams::make(37));
  Prg prg(Block{1, 3});
  const auto sk = ctx.keygen(prg);
  std::vector<std::uint64_t> m(ctx.n());
  for (auto& x : m) x = prg.next_bits(37);
  for (auto _ : state) benchmark::DoNotOptimize(ctx.encrypt(sk, m, prg));
}
BENCHMARK(BM_Encrypt);

void BM_MulPlainAcc(benchmark::State& state) {
  const RlweContext ctx(RlweParams::make(37));
  Prg prg(Block{1, 4});
  const auto sk = ctx.keygen(prg);
  auto ct = ctx.encrypt(sk, std::vector<std::uint64_t>{1, 2, 3}, prg);
  ctx.ct_to_ntt(ct);
  Poly pt = ctx.encode_signed(std::vector<std::int64_t>{5, -3, 7});
  ctx.to_ntt(pt, NttUse::kWeight);
  Ciphertext acc{ctx.zero(Domain::kNtt), ctx.zero(Domain::kNtt), std::nullopt};
  for (auto _ : state) {
    ctx.mul_plain_acc(acc, ct, pt);
    benchmark::DoNotOptimize(acc.b.data.data());
  }
}
BENCHMARK(BM_MulPlainAcc);

void BM_PreprocessConvWeights(benchmark::State& state) {
  const RlweContext ctx(RlweParams::make(37));
  const auto c = static_cast<std::uint32_t>(state.range(0));
  const ConvShape shape{.channels = c, .height = 16, .width = 16, .out_channels = 16,
                        .kernel_h = 3, .kernel_w = 3, .pad = 1};
  const auto plan = plan_conv(shape, ctx.n());
  std::vector<std::uint64_t> k(plan.layout.weight_size, 3);
  for (auto _ : state) benchmark::DoNotOptimize(preprocess_weights(ctx, plan.layout, k));
}
BENCHMARK(BM_PreprocessConvWeights)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace seconnds
