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

#include "seconnds/boolean.hpp"
#include "seconnds/compare.hpp"
#include "seconnds/nonlinear.hpp"

namespace seconnds {
namespace {

SessionConfig bench_config(MillVariant v = MillVariant::kLinear) {
  SessionConfig c;
  c.backend = TripleBackend::kDealer;
  c.test_mode = true;
  c.mill = v;
  c.seed = Block{3, 3};
  return c;
}

/// Runs f on both parties over loopback per iteration; reports the server's
/// bytes sent per item.
template <class F>
void two_party(benchmark::State& state, const SessionConfig& cfg, std::size_t items, F&& f) {
  std::uint64_t bytes = 0;
  for (auto _ : state) {
    auto party = [&](Party p) {
      return [&, p](Channel& ch) {
        Session s(p, ch, cfg);
        s.prefill_triples(1);
        const auto before = ch.meter().total();
        f(s);
        return (ch.meter().total() - before).bytes_sent;
      };
    };
    bytes = run_pair(party(Party::kServer), party(Party::kClient)).first;
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(items));
  state.counters["sent_B_per_item"] = static_cast<double>(bytes) / static_cast<double>(items);
}

void BM_AndBatch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::uint8_t> x(n, 1), y(n, 0);
  two_party(state, bench_config(), n, [&](Session& s) { and_batch(s, Tag::kAnd, x, y); });
}
BENCHMARK(BM_AndBatch)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

void BM_Mill(benchmark::State& state) {
  const auto bits = static_cast<unsigned>(state.range(0));
  const auto v = state.range(1) ? MillVariant::kLogDepth : MillVariant::kLinear;
  constexpr std::size_t n = 1 << 13;
  Prg prg(Block{3, 4});
  std::vector<std::uint64_t> in(n);
  for (auto& x : in) x = prg.next_bits(bits);
  two_party(state, bench_config(v), n,
            [&](Session& s) { mill(s, Tag::kMill, bits, true, in); });
}
BENCHMARK(BM_Mill)
    ->ArgsProduct({{8, 32, 37}, {0, 1}})
    ->ArgNames({"bits", "logdepth"})
    ->Unit(benchmark::kMillisecond);

void BM_Relu(benchmark::State& state) {
  const Ring ring(37);
  const auto n = static_cast<std::size_t>(state.range(0));
  Prg prg(Block{3, 5});
  std::vector<std::uint64_t> x(n);
  for (auto& v : x) v = ring.random(prg);
  two_party(state, bench_config(), n, [&](Session& s) { relu(s, Tag::kRelu, ring, x); });
}
BENCHMARK(BM_Relu)->Arg(1 << 12)->Unit(benchmark::kMillisecond);

void BM_Truncate(benchmark::State& state) {
  const Ring ring(37);
  const auto mode = state.range(0) ? TruncMode::kGeneral : TruncMode::kMsbKnown;
  constexpr std::size_t n = 1 << 12;
  Prg prg(Block{3, 6});
  std::vector<std::uint64_t> x(n);
  for (auto& v : x) v = prg.next_bits(36);
  two_party(state, bench_config(), n,
            [&](Session& s) { truncate(s, Tag::kTrunc, ring, x, 12, mode); });
}
BENCHMARK(BM_Truncate)->Arg(0)->Arg(1)->ArgName("general")->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace seconnds
