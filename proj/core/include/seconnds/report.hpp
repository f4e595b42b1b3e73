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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seconnds/transport.hpp"

namespace seconnds {

/// Time and traffic of one slice of a run, from one party's view.
struct PhaseStats {
  double online_ms = 0;
  double offline_ms = 0;
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_received = 0;
  std::uint64_t rounds = 0;
  std::uint64_t triples = 0;
  std::uint64_t and_gates = 0;
  std::uint64_t cots = 0;

  static PhaseStats from_counters(const TagCounters& c);
  PhaseStats& operator+=(const PhaseStats& o);
  std::uint64_t bytes() const { return bytes_sent + bytes_received; }
  /// Counter equality plus times within tol milliseconds.
  bool matches(const PhaseStats& o, double tol_ms = 1e-6) const;
  bool operator==(const PhaseStats&) const = default;
};

struct LayerRecord {
  std::uint32_t index = 0;
  std::string kind;
  std::string in_shape;
  std::string out_shape;
  PhaseStats stats;
  /// Closed-form demand for this layer, per party.
  std::uint64_t triple_demand = 0;
  std::uint64_t cot_demand = 0;
  /// Triple chunks generated while the layer ran.
  std::uint64_t online_refills = 0;

  bool operator==(const LayerRecord&) const = default;
};

struct NamedStats {
  std::string name;
  PhaseStats stats;

  bool operator==(const NamedStats&) const = default;
};

struct RunReport {
  std::string program;
  std::string party;
  std::string mill;
  std::string backend;
  PhaseStats setup;
  std::vector<LayerRecord> layers;
  /// Setup plus one entry per layer kind present in the run.
  std::vector<NamedStats> protocols;
  /// Counters per wire tag; times are not attributed to tags.
  std::vector<NamedStats> tags;
  PhaseStats total;
  std::optional<std::uint64_t> label;
  /// Oracle comparison, filled in when the logits were revealed.
  std::vector<std::int64_t> logits;
  std::vector<std::int64_t> oracle_logits;
  std::optional<std::uint64_t> oracle_label;
  std::optional<double> mape;
  std::optional<std::uint64_t> max_deviation;
  std::optional<std::uint64_t> deviation_bound;
  std::vector<std::string> warnings;

  /// Rebuilds protocols and total from setup and layers.
  void finalize();
  /// total == setup + layers == sum of protocols; tag counters sum to the total.
  bool consistent(double tol_ms = 1e-6) const;
  bool operator==(const RunReport&) const = default;
};

enum class ReportFormat : std::uint8_t { kText, kJson, kCsv };

ReportFormat parse_report_format(const std::string& s);
std::string format_report(const RunReport& r, ReportFormat f);
RunReport parse_report_json(const std::string& text);

}  // namespace seconnds
