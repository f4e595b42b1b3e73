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
#include <fstream>

#include "seconnds/errors.hpp"
#include "seconnds/linconv.hpp"
#include "support.hpp"

namespace seconnds {
namespace {

constexpr unsigned kBits = 37;

const RlweContext& context() {
  static const RlweContext ctx(RlweParams::make(kBits));
  return ctx;
}

std::vector<std::uint64_t> small_signed(const Ring& ring, std::size_t n, unsigned mag_bits,
                                        Prg& prg) {
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) {
    x = ring.from_signed(static_cast<std::int64_t>(prg.next_bits(mag_bits + 1)) -
                         (std::int64_t{1} << mag_bits));
  }
  return v;
}

struct LinearRun {
  std::vector<std::uint64_t> result;
  LinearStats server_stats;
  TagCounters server_meter;
  TagCounters client_meter;
};

LinearRun run_linear(Tag tag, const LinearLayout& layout, std::span<const std::uint64_t> x,
                     const PreprocessedWeights& w, std::uint64_t seed) {
  const Ring ring(kBits);
  auto prg = testing::test_prg(seed);
  const auto [x0, x1] = share_split(ring, x, prg);
  auto cfg = testing::test_config(kBits);
  auto [r0, r1] = testing::run_two(cfg, [&](Session& s) {
    HeSession he(context());
    he.setup(s);
    LinearStats st;
    auto out = linear_secure(s, he, tag, layout, s.is_server() ? x0 : x1,
                             s.is_server() ? &w : nullptr, &st);
    return std::make_tuple(out, st, s.channel().meter().at(tag));
  });
  LinearRun run;
  run.result = reconstruct(ring, std::get<0>(r0), std::get<0>(r1));
  run.server_stats = std::get<1>(r0);
  run.server_meter = std::get<2>(r0);
  run.client_meter = std::get<2>(r1);
  return run;
}

void check_conv(const ConvShape& shape, std::uint64_t seed) {
  const Ring ring(kBits);
  auto prg = testing::test_prg(seed);
  const auto x = small_signed(
      ring, static_cast<std::size_t>(shape.channels) * shape.height * shape.width, 11, prg);
  const auto k = small_signed(ring,
                              static_cast<std::size_t>(shape.out_channels) * shape.channels *
                                  shape.kernel_h * shape.kernel_w,
                              7, prg);
  const auto plan = plan_conv(shape, context().n());
  const auto w = preprocess_weights(context(), plan.layout, k);
  const auto run = run_linear(Tag::kConv, plan.layout, x, w, seed + 1);
  EXPECT_EQ(run.result, conv2d_reference(ring, shape, x, k))
      << "C=" << shape.channels << " H=" << shape.height << " W=" << shape.width
      << " O=" << shape.out_channels << " k=" << shape.kernel_h << "x" << shape.kernel_w
      << " s=" << shape.stride << " p=" << shape.pad;
  EXPECT_EQ(run.server_stats.online_weight_ntts, 0u);
}

TEST(ConvReference, HandExample) {
  const Ring ring(kBits);
  ConvShape s{.channels = 1, .height = 3, .width = 3, .out_channels = 1, .kernel_h = 2,
              .kernel_w = 2};
  const std::vector<std::uint64_t> x{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::vector<std::uint64_t> k{1, 0, 0, ring.from_signed(-1)};
  const auto y = conv2d_reference(ring, s, x, k);
  EXPECT_EQ(y, std::vector<std::uint64_t>(4, ring.from_signed(-4)));
  s.pad = 1;
  EXPECT_EQ(conv2d_reference(ring, s, x, k).size(), 16u);
}

TEST(MatvecReference, HandExample) {
  const Ring ring(kBits);
  const std::vector<std::uint64_t> w{1, 2, 3, 4, 5, 6};
  const std::vector<std::uint64_t> x{1, ring.from_signed(-1), 2};
  EXPECT_EQ(matvec_reference(ring, FcShape{2, 3}, w, x), (std::vector<std::uint64_t>{5, 11}));
}

TEST(ConvSecure, SinglePixel) {
  check_conv(ConvShape{.channels = 1, .height = 1, .width = 1, .out_channels = 1}, 1);
}

TEST(ConvSecure, SmallKernel) {
  check_conv(ConvShape{.channels = 1, .height = 3, .width = 3, .out_channels = 1, .kernel_h = 2,
                       .kernel_w = 2},
             2);
}

TEST(ConvSecure, MultiChannelMultiOutput) {
  check_conv(ConvShape{.channels = 2, .height = 5, .width = 5, .out_channels = 3, .kernel_h = 2,
                       .kernel_w = 2},
             3);
}

TEST(ConvSecure, StrideAndPadding) {
  check_conv(ConvShape{.channels = 3, .height = 7, .width = 6, .out_channels = 2, .kernel_h = 3,
                       .kernel_w = 3, .stride = 2, .pad = 1},
             4);
}

TEST(ConvSecure, SpansSeveralPolynomials) {
  const ConvShape shape{.channels = 16, .height = 32, .width = 32, .out_channels = 4,
                        .kernel_h = 3, .kernel_w = 3, .pad = 1};
  const auto plan = plan_conv(shape, context().n());
  EXPECT_GT(plan.layout.inputs.size(), 1u);
  check_conv(shape, 5);
}

TEST(ConvSecure, TallImageTilesRows) {
  const ConvShape shape{.channels = 1, .height = 100, .width = 60, .out_channels = 2,
                        .kernel_h = 3, .kernel_w = 3};
  const auto plan = plan_conv(shape, context().n());
  EXPECT_GT(plan.row_tiles, 1u);
  check_conv(shape, 6);
}

TEST(ConvSecure, ZeroKernelGivesZero) {
  const Ring ring(kBits);
  const ConvShape shape{.channels = 2, .height = 4, .width = 4, .out_channels = 2,
                        .kernel_h = 3, .kernel_w = 3};
  auto prg = testing::test_prg(7);
  const auto x = small_signed(ring, 32, 11, prg);
  const std::vector<std::uint64_t> k(2 * 2 * 9, 0);
  const auto plan = plan_conv(shape, context().n());
  const auto w = preprocess_weights(context(), plan.layout, k);
  const auto run = run_linear(Tag::kConv, plan.layout, x, w, 8);
  EXPECT_EQ(run.result, std::vector<std::uint64_t>(8, 0));
}

TEST(ConvPlan, RejectsOversizedRows) {
  const ConvShape shape{.channels = 1, .height = 8, .width = 5000, .out_channels = 1,
                        .kernel_h = 3, .kernel_w = 3};
  EXPECT_THROW(plan_conv(shape, 4096), DomainError);
  ConvShape bad{.channels = 1, .height = 2, .width = 2, .out_channels = 1, .kernel_h = 3,
                .kernel_w = 3};
  EXPECT_THROW(bad.validate(), DomainError);
  bad.kernel_h = 1;
  bad.kernel_w = 1;
  bad.stride = 0;
  EXPECT_THROW(bad.validate(), DomainError);
}

void check_fc(FcShape shape, std::uint64_t seed) {
  const Ring ring(kBits);
  auto prg = testing::test_prg(seed);
  const auto x = small_signed(ring, shape.cols, 11, prg);
  const auto wv = small_signed(ring, static_cast<std::size_t>(shape.rows) * shape.cols, 7, prg);
  const auto plan = plan_fc(shape, context().n());
  const auto w = preprocess_weights(context(), plan.layout, wv);
  const auto run = run_linear(Tag::kFc, plan.layout, x, w, seed + 1);
  EXPECT_EQ(run.result, matvec_reference(ring, shape, wv, x))
      << shape.rows << "x" << shape.cols;
  EXPECT_EQ(run.server_stats.online_weight_ntts, 0u);
}

TEST(FcSecure, Small) { check_fc(FcShape{16, 64}, 20); }
TEST(FcSecure, OneByOne) { check_fc(FcShape{1, 1}, 21); }
TEST(FcSecure, WideInput) { check_fc(FcShape{10, 5000}, 22); }
TEST(FcSecure, Large) { check_fc(FcShape{1000, 512}, 23); }

TEST(LinearSecure, CommunicationIsCiphertextSized) {
  const Ring ring(kBits);
  const FcShape shape{64, 300};
  auto prg = testing::test_prg(30);
  const auto x = small_signed(ring, shape.cols, 11, prg);
  const auto wv = small_signed(ring, 64 * 300, 7, prg);
  const auto plan = plan_fc(shape, context().n());
  const auto w = preprocess_weights(context(), plan.layout, wv);
  const auto run = run_linear(Tag::kFc, plan.layout, x, w, 31);
  const std::size_t in = plan.layout.inputs.size();
  const std::size_t out = plan.layout.outputs.size();
  EXPECT_EQ(run.server_stats.input_cts, in);
  EXPECT_EQ(run.server_stats.output_cts, out);
  const auto& ctx = context();
  const std::uint64_t up = 5 + 4 + in * (4 + ctx.ciphertext_bytes(true));
  const std::uint64_t down = 5 + 4 + out * (4 + ctx.ciphertext_bytes(false));
  EXPECT_EQ(run.client_meter.bytes_sent, up);
  EXPECT_EQ(run.server_meter.bytes_sent, down);
  EXPECT_EQ(run.server_meter.bytes_received, up);
  EXPECT_EQ(run.server_meter.rounds, 2u);
}

TEST(LinearSecure, RejectsForeignWeights) {
  const Ring ring(kBits);
  const auto p1 = plan_fc(FcShape{4, 8}, context().n());
  const auto p2 = plan_fc(FcShape{4, 9}, context().n());
  const auto w2 = preprocess_weights(context(), p2.layout, std::vector<std::uint64_t>(36, 1));
  const std::vector<std::uint64_t> x(8, 0);
  auto cfg = testing::test_config(kBits);
  EXPECT_THROW(
      testing::run_two(cfg,
                       [&](Session& s) {
                         HeSession he(context());
                         he.setup(s);
                         return linear_secure(s, he, Tag::kFc, p1.layout, x,
                                              s.is_server() ? &w2 : nullptr);
                       }),
      Error);
}

TEST(LinearSecure, NeedsKeys) {
  auto [a, b] = make_loopback_channels();
  Session s(Party::kClient, b, testing::test_config(kBits));
  HeSession he(context());
  const auto plan = plan_fc(FcShape{1, 1}, context().n());
  const std::vector<std::uint64_t> x{0};
  EXPECT_THROW(linear_secure(s, he, Tag::kFc, plan.layout, x, nullptr), StateError);
}

TEST(Preprocess, DeterministicAndCounted) {
  const Ring ring(kBits);
  auto prg = testing::test_prg(40);
  const ConvShape shape{.channels = 3, .height = 8, .width = 8, .out_channels = 4,
                        .kernel_h = 3, .kernel_w = 3};
  const auto k = small_signed(ring, 4 * 3 * 9, 7, prg);
  const auto plan = plan_conv(shape, context().n());
  const auto before = context().forward_ntt_count(NttUse::kWeight);
  const auto w1 = preprocess_weights(context(), plan.layout, k);
  const auto w2 = preprocess_weights(context(), plan.layout, k);
  EXPECT_EQ(w1, w2);
  EXPECT_EQ(context().forward_ntt_count(NttUse::kWeight) - before, 2 * w1.polys.size());
  EXPECT_EQ(w1.layout_hash, plan.layout.hash());
  EXPECT_EQ(w1.params_hash, context().params().hash());
  EXPECT_GT(w1.max_l1, 0.0);
  EXPECT_LE(w1.max_l1, 3.0 * 9 * 128);
  EXPECT_THROW(preprocess_weights(context(), plan.layout, std::span(k).first(k.size() - 1)),
               DomainError);
}

TEST(Preprocess, LayoutHashSeparatesShapes) {
  const auto a = plan_conv(ConvShape{.channels = 1, .height = 5, .width = 5}, 4096);
  const auto b = plan_conv(ConvShape{.channels = 1, .height = 5, .width = 6}, 4096);
  EXPECT_NE(a.layout.hash(), b.layout.hash());
  EXPECT_EQ(a.layout.hash(), plan_conv(ConvShape{.channels = 1, .height = 5, .width = 5}, 4096)
                                 .layout.hash());
}

TEST(WeightCache, RoundTripAndCorruption) {
  const Ring ring(kBits);
  auto prg = testing::test_prg(50);
  const auto plan = plan_fc(FcShape{10, 40}, context().n());
  const auto w = preprocess_weights(context(), plan.layout, small_signed(ring, 400, 7, prg));
  const auto path = std::filesystem::temp_directory_path() /
                    ("seconnds_cache_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + ".bin");
  const std::vector<WeightCacheEntry> entries{{0xabcdef, 3, w}};
  save_weight_cache(path, context(), entries);
  const auto loaded = load_weight_cache(path, context());
  ASSERT_EQ(loaded.size(), 1u);
  EXPECT_EQ(loaded[0].model_hash, 0xabcdefu);
  EXPECT_EQ(loaded[0].layer, 3u);
  EXPECT_EQ(loaded[0].weights, w);

  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.put('X');
  }
  EXPECT_THROW(load_weight_cache(path, context()), FormatError);
  std::filesystem::resize_file(path, 16);
  EXPECT_THROW(load_weight_cache(path, context()), FormatError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_weight_cache(path, context()), Error);
}

}  // namespace
}  // namespace seconnds
