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

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seconnds/compare.hpp"
#include "seconnds/errors.hpp"
#include "seconnds/inference.hpp"
#include "seconnds/linconv.hpp"
#include "seconnds/nonlinear.hpp"
#include "seconnds/oracle.hpp"
#include "seconnds/program.hpp"
#include "seconnds/report.hpp"

namespace fs = std::filesystem;
using namespace seconnds;

namespace {

/// SECONNDS_SEED pins every party's randomness; unset means OS entropy.
Block seed_from_env() {
  const char* env = std::getenv("SECONNDS_SEED");
  if (!env || !*env) return Block{};
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 0);
  if (*end != '\0') throw ConfigError("SECONNDS_SEED must be an integer");
  return Block{v, 0x5345434f4e4e4453ULL};
}

SessionConfig make_config(const SecProgram& p, const std::string& mill, const std::string& triples,
                          std::size_t he_degree) {
  SessionConfig c;
  c.ring = p.ring;
  c.mill = mill.empty() ? p.mill : parse_mill_variant(mill);
  c.backend = parse_triple_backend(triples);
  c.test_mode = c.backend == TripleBackend::kDealer;
  c.he_degree = he_degree;
  c.seed = seed_from_env();
  if (c.test_mode) std::cerr << "warning: dealer triples are insecure and meant for testing\n";
  return c;
}

std::pair<std::string, std::uint16_t> split_addr(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw ConfigError("--addr must be host:port");
  const std::string host = addr.substr(0, colon);
  const unsigned long port = std::stoul(addr.substr(colon + 1));
  if (port == 0 || port > 65535) throw ConfigError("port out of range");
  return {host.empty() ? "127.0.0.1" : host, static_cast<std::uint16_t>(port)};
}

ReportFormat format_for(const std::string& flag, const std::string& path) {
  if (!flag.empty()) return parse_report_format(flag);
  const auto ext = fs::path(path).extension().string();
  if (ext == ".json") return ReportFormat::kJson;
  if (ext == ".csv") return ReportFormat::kCsv;
  return ReportFormat::kText;
}

void emit_report(const RunReport& r, const std::string& path, const std::string& format) {
  const auto text = format_report(r, format_for(format, path));
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write report to " + path);
  out << text;
}

std::vector<std::int64_t> signed_values(const Ring& ring, std::span<const std::uint64_t> v) {
  std::vector<std::int64_t> out;
  out.reserve(v.size());
  for (auto x : v) out.push_back(ring.signed_view(x));
  return out;
}

// run ------------------------------------------------------------------------

struct RunArgs {
  std::string role;
  std::string program;
  std::string model;
  std::string input;
  std::string addr = "127.0.0.1:7766";
  std::string mill;
  std::string triples = "iknp";
  std::string report;
  std::string format;
  std::string cache;
  std::size_t he_degree = 4096;
};

int cmd_run(const RunArgs& a) {
  const Party party = a.role == "server" ? Party::kServer : Party::kClient;
  const auto program = load_program(a.program);
  const auto cfg = make_config(program, a.mill, a.triples, a.he_degree);
  const CompiledProgram cp(program, cfg.he_degree);

  std::optional<ServerModel> server;
  std::optional<QuantTensor> input;
  if (party == Party::kServer) {
    if (a.model.empty()) throw ConfigError("the server needs --model");
    std::optional<fs::path> cache;
    if (!a.cache.empty()) cache = a.cache;
    server = prepare_server_model(cp, load_model(a.model), cache);
  } else {
    if (a.input.empty()) throw ConfigError("the client needs --input");
    input = load_tensor(a.input);
  }

  const auto [host, port] = split_addr(a.addr);
  Channel ch(party == Party::kServer ? tcp_listen_accept(port) : tcp_connect(host, port));
  Session s(party, ch, cfg);
  auto result = execute_inference(s, cp, server ? &*server : nullptr, input ? &*input : nullptr);
  ch.close();

  if (result.label) std::cout << "label " << *result.label << "\n";
  const auto& t = result.report.total;
  std::cerr << a.role << ": " << t.bytes_sent << " B sent, " << t.bytes_received
            << " B received, " << t.rounds << " rounds, " << t.online_ms << " ms online\n";
  for (const auto& w : result.report.warnings) std::cerr << "warning: " << w << "\n";
  if (!a.report.empty()) emit_report(result.report, a.report, a.format);
  return 0;
}

// demo -----------------------------------------------------------------------

int cmd_demo(const RunArgs& a) {
  const auto program = load_program(a.program);
  const auto model = load_model(a.model);
  const auto input = load_tensor(a.input);
  const auto cfg = make_config(program, a.mill, a.triples, a.he_degree);
  const CompiledProgram cp(program, cfg.he_degree);
  const auto server = prepare_server_model(cp, model);

  auto party = [&](Party p) {
    return [&, p](Channel& ch) {
      Session s(p, ch, cfg);
      return execute_inference(s, cp, p == Party::kServer ? &server : nullptr,
                               p == Party::kServer ? nullptr : &input);
    };
  };
  auto [r0, r1] = run_pair(party(Party::kServer), party(Party::kClient));

  const Ring ring = program.ring.ring();
  const auto logits = reconstruct(ring, r0.logit_share, r1.logit_share);
  const auto oracle = plaintext_oracle(program, model, input);
  RunReport rep = r1.report;
  rep.logits = signed_values(ring, logits);
  rep.oracle_logits = signed_values(ring, oracle.logits);
  rep.oracle_label = oracle.label;
  rep.mape = logit_mape(ring, logits, oracle.logits);
  rep.max_deviation = logit_max_deviation(ring, logits, oracle.logits);
  rep.deviation_bound = logit_error_bound(program, model);

  std::cout << "label " << r1.label.value_or(0) << " (oracle " << oracle.label << ")\n";
  std::cout << "max logit deviation " << *rep.max_deviation << " LSB (bound "
            << *rep.deviation_bound << "), MAPE " << *rep.mape << "\n";
  if (!a.report.empty()) emit_report(rep, a.report, a.format);
  return r1.label == oracle.label ? 0 : 2;
}

// oracle ---------------------------------------------------------------------

int cmd_oracle(const std::string& program_path, const std::string& model_path,
               const std::string& input_path) {
  const auto program = load_program(program_path);
  const auto model = load_model(model_path);
  model.check_against(program);
  const auto result = plaintext_oracle(program, model, load_tensor(input_path));
  const Ring ring = program.ring.ring();
  std::cout << "logits";
  for (auto v : result.logits) std::cout << ' ' << ring.signed_view(v);
  std::cout << "\nlabel " << result.label << "\n";
  return 0;
}

// bench ----------------------------------------------------------------------

struct BenchArgs {
  std::string kind;
  unsigned bits = 37;
  std::size_t count = std::size_t{1} << 13;
  std::string mill = "linear";
  std::string triples = "iknp";
  std::size_t window = 4;
  unsigned shift = 12;
  std::string mode = "general";
  std::uint32_t channels = 3;
  std::uint32_t size = 32;
  std::uint32_t out_channels = 16;
  std::uint32_t kernel = 3;
};

TruncMode parse_trunc_mode(const std::string& s) {
  if (s == "msb_known") return TruncMode::kMsbKnown;
  if (s == "general") return TruncMode::kGeneral;
  if (s == "signed") return TruncMode::kSigned;
  throw ConfigError("unknown trunc mode '" + s + "'");
}

int cmd_bench(const BenchArgs& a) {
  SecProgram dummy;
  dummy.ring.bits = a.bits;
  dummy.ring.scale = 0;
  auto cfg = make_config(dummy, a.mill, a.triples, 4096);
  const Ring ring(a.bits);
  Prg prg(cfg.seed == Block{} ? Block{1, 2} : cfg.seed, 99);

  const bool conv = a.kind == "conv";
  const std::size_t n = conv ? static_cast<std::size_t>(a.channels) * a.size * a.size
                             : (a.kind == "maxpool" ? a.count * a.window : a.count);
  std::vector<std::uint64_t> x(n);
  for (auto& v : x) v = a.kind == "maxpool" || conv ? prg.next_bits(a.bits - 2) : ring.random(prg);
  const auto mode = parse_trunc_mode(a.mode);
  if (a.kind == "trunc" && mode == TruncMode::kMsbKnown) {
    for (auto& v : x) v &= ring.modulus_half() - 1;
  }
  const auto [x0, x1] = share_split(ring, x, prg);

  std::optional<RlweContext> ctx;
  std::optional<ConvPlan> plan;
  std::optional<PreprocessedWeights> weights;
  if (conv) {
    ctx.emplace(RlweParams::make(a.bits));
    const ConvShape shape{.channels = a.channels, .height = a.size, .width = a.size,
                          .out_channels = a.out_channels, .kernel_h = a.kernel,
                          .kernel_w = a.kernel, .pad = a.kernel / 2};
    plan = plan_conv(shape, ctx->n());
    std::vector<std::uint64_t> k(plan->layout.weight_size);
    for (auto& v : k) v = ring.from_signed(static_cast<std::int64_t>(prg.next_bits(8)) - 128);
    weights = preprocess_weights(*ctx, plan->layout, k);
  } else if (a.kind != "mill" && a.kind != "relu" && a.kind != "trunc" && a.kind != "maxpool") {
    throw ConfigError("unknown bench kind '" + a.kind + "'");
  }

  // Correlations are generated before the timed section.
  OpBudget demand;
  if (a.kind == "mill") {
    demand = {mill_and_count(a.bits, cfg.mill) * a.count, 0};
  } else if (a.kind == "relu") {
    const auto b = relu_budget(a.bits, cfg.mill);
    demand = {b.ands * a.count, b.cots * a.count};
  } else if (a.kind == "trunc") {
    const auto b = trunc_budget(a.bits, mode, cfg.mill);
    demand = {b.ands * a.count, b.cots * a.count};
  } else if (a.kind == "maxpool") {
    const auto b = relu_budget(a.bits, cfg.mill);
    demand = {b.ands * a.count * (a.window - 1), b.cots * a.count * (a.window - 1)};
  }

  using Clock = std::chrono::steady_clock;
  auto party = [&](Party p) {
    return [&, p](Channel& ch) {
      Session s(p, ch, cfg);
      const auto t0 = Clock::now();
      s.setup();
      s.prefill_triples(demand.ands);
      s.prefill_cots(demand.cots);
      std::optional<HeSession> he;
      if (conv) {
        he.emplace(*ctx);
        he->setup(s);
      }
      const auto t1 = Clock::now();
      const auto before = ch.meter().total();
      const auto& mine = p == Party::kServer ? x0 : x1;
      if (a.kind == "mill") {
        std::vector<std::uint64_t> in(mine.begin(), mine.end());
        mill(s, Tag::kMill, a.bits, true, in);
      } else if (a.kind == "relu") {
        relu(s, Tag::kRelu, ring, mine);
      } else if (a.kind == "trunc") {
        truncate(s, Tag::kTrunc, ring, mine, a.shift, mode);
      } else if (a.kind == "maxpool") {
        maxpool(s, Tag::kMaxPool, ring, mine, a.window);
      } else {
        conv2d_secure(s, *he, *plan, mine, p == Party::kServer ? &*weights : nullptr);
      }
      const auto t2 = Clock::now();
      const auto c = ch.meter().total() - before;
      return std::make_tuple(std::chrono::duration<double, std::milli>(t1 - t0).count(),
                             std::chrono::duration<double, std::milli>(t2 - t1).count(), c);
    };
  };
  const auto [s, c] = run_pair(party(Party::kServer), party(Party::kClient));
  const std::size_t items = conv ? 1 : a.count;
  std::printf("bench %s bits=%u count=%zu mill=%s triples=%s\n", a.kind.c_str(), a.bits, items,
              mill_variant_name(cfg.mill), triple_backend_name(cfg.backend));
  for (const auto* r : {&s, &c}) {
    const auto& [setup_ms, ms, t] = *r;
    std::printf("  %s: setup %.1f ms, run %.1f ms, sent %llu B (%.2f B/item), rounds %llu, "
                "ANDs %llu, COTs %llu\n",
                r == &s ? "server" : "client", setup_ms, ms, (unsigned long long)t.bytes_sent,
                static_cast<double>(t.bytes_sent) / items, (unsigned long long)t.rounds,
                (unsigned long long)t.and_gates, (unsigned long long)t.cots);
  }
  return 0;
}

// make-tinynet ---------------------------------------------------------------

int cmd_make_tinynet(std::uint64_t seed, const std::string& dir) {
  const auto f = make_tinynet(seed);
  fs::create_directories(dir);
  const fs::path d(dir);
  {
    std::ofstream out(d / "tinynet.prg");
    out << format_program(f.program);
  }
  save_model(d / "tinynet.scnm", f.model);
  save_tensor(d / "tinynet_input.scnt", random_input(f.program, seed));
  std::cout << "wrote " << (d / "tinynet.prg").string() << ", tinynet.scnm, tinynet_input.scnt\n";
  return 0;
}

int cmd_make_input(const std::string& program_path, std::uint64_t seed, unsigned magnitude,
                   const std::string& out) {
  save_tensor(out, random_input(load_program(program_path), seed, magnitude));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-party secure neural network inference"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one party of a secure inference over TCP");
  run_cmd->add_option("--role", run.role, "server or client")
      ->required()
      ->check(CLI::IsMember({"server", "client"}));
  run_cmd->add_option("--program", run.program, "Program file (.prg)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--model", run.model, "Model file (.scnm), server only")->check(CLI::ExistingFile);
  run_cmd->add_option("--input", run.input, "Input tensor (.scnt), client only")->check(CLI::ExistingFile);
  run_cmd->add_option("--addr", run.addr, "host:port; the server listens on the port")->capture_default_str();
  run_cmd->add_option("--mill", run.mill, "linear or logdepth; defaults to the program's choice")
      ->check(CLI::IsMember({"linear", "logdepth"}));
  run_cmd->add_option("--triples", run.triples, "iknp or dealer")
      ->capture_default_str()
      ->check(CLI::IsMember({"iknp", "dealer"}));
  run_cmd->add_option("--report", run.report, "Write the run report here ('-' for stdout)");
  run_cmd->add_option("--format", run.format, "text, json or csv; defaults to the report extension")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  run_cmd->add_option("--cache", run.cache, "Server weight cache file");
  run_cmd->add_option("--he-degree", run.he_degree, "RLWE ring degree")->capture_default_str();

  RunArgs demo;
  demo.triples = "iknp";
  auto* demo_cmd = app.add_subcommand("demo", "Run both parties in-process and compare with the oracle");
  demo_cmd->add_option("--program", demo.program)->required()->check(CLI::ExistingFile);
  demo_cmd->add_option("--model", demo.model)->required()->check(CLI::ExistingFile);
  demo_cmd->add_option("--input", demo.input)->required()->check(CLI::ExistingFile);
  demo_cmd->add_option("--mill", demo.mill)->check(CLI::IsMember({"linear", "logdepth"}));
  demo_cmd->add_option("--triples", demo.triples)->capture_default_str()->check(CLI::IsMember({"iknp", "dealer"}));
  demo_cmd->add_option("--report", demo.report);
  demo_cmd->add_option("--format", demo.format)->check(CLI::IsMember({"text", "json", "csv"}));
  demo_cmd->add_option("--he-degree", demo.he_degree)->capture_default_str();

  std::string o_program, o_model, o_input;
  auto* oracle_cmd = app.add_subcommand("oracle", "Plaintext fixed-point reference evaluation");
  oracle_cmd->add_option("--program", o_program)->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--model", o_model)->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--input", o_input)->required()->check(CLI::ExistingFile);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Loopback micro-benchmark of one protocol");
  bench_cmd->add_option("kind", bench.kind, "mill, relu, trunc, maxpool or conv")
      ->required()
      ->check(CLI::IsMember({"mill", "relu", "trunc", "maxpool", "conv"}));
  bench_cmd->add_option("--bits", bench.bits)->capture_default_str()->check(CLI::Range(2u, kMaxRingBits));
  bench_cmd->add_option("--count", bench.count)->capture_default_str();
  bench_cmd->add_option("--mill", bench.mill)->capture_default_str()->check(CLI::IsMember({"linear", "logdepth"}));
  bench_cmd->add_option("--triples", bench.triples)->capture_default_str()->check(CLI::IsMember({"iknp", "dealer"}));
  bench_cmd->add_option("--window", bench.window, "maxpool window")->capture_default_str();
  bench_cmd->add_option("--shift", bench.shift, "trunc shift")->capture_default_str();
  bench_cmd->add_option("--mode", bench.mode, "trunc mode")
      ->capture_default_str()
      ->check(CLI::IsMember({"msb_known", "general", "signed"}));
  bench_cmd->add_option("--channels", bench.channels, "conv input channels")->capture_default_str();
  bench_cmd->add_option("--size", bench.size, "conv input height and width")->capture_default_str();
  bench_cmd->add_option("--out-channels", bench.out_channels)->capture_default_str();
  bench_cmd->add_option("--kernel", bench.kernel)->capture_default_str();

  std::uint64_t t_seed = 1;
  std::string t_dir = "models";
  auto* tiny_cmd = app.add_subcommand("make-tinynet", "Write the TinyNet program, model and a sample input");
  tiny_cmd->add_option("--seed", t_seed)->capture_default_str();
  tiny_cmd->add_option("--out", t_dir, "Output directory")->capture_default_str();

  std::string i_program, i_out;
  std::uint64_t i_seed = 1;
  unsigned i_mag = 11;
  auto* input_cmd = app.add_subcommand("make-input", "Write a random input tensor for a program");
  input_cmd->add_option("--program", i_program)->required()->check(CLI::ExistingFile);
  input_cmd->add_option("--seed", i_seed)->capture_default_str();
  input_cmd->add_option("--magnitude-bits", i_mag)->capture_default_str();
  input_cmd->add_option("--out", i_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run);
    if (*demo_cmd) return cmd_demo(demo);
    if (*oracle_cmd) return cmd_oracle(o_program, o_model, o_input);
    if (*bench_cmd) return cmd_bench(bench);
    if (*tiny_cmd) return cmd_make_tinynet(t_seed, t_dir);
    if (*input_cmd) return cmd_make_input(i_program, i_seed, i_mag, i_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
