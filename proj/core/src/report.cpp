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

#include "seconnds/report.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "json.hpp"
#include "seconnds/errors.hpp"

namespace seconnds {

using nlohmann::json;

PhaseStats PhaseStats::from_counters(const TagCounters& c) {
  PhaseStats s;
  s.bytes_sent = c.bytes_sent;
  s.bytes_received = c.bytes_received;
  s.rounds = c.rounds;
  s.triples = c.triples_consumed;
  s.and_gates = c.and_gates;
  s.cots = c.cots;
  return s;
}

PhaseStats& PhaseStats::operator+=(const PhaseStats& o) {
  online_ms += o.online_ms;
  offline_ms += o.offline_ms;
  bytes_sent += o.bytes_sent;
  bytes_received += o.bytes_received;
  rounds += o.rounds;
  triples += o.triples;
  and_gates += o.and_gates;
  cots += o.cots;
  return *this;
}

namespace {

bool same_counters(const PhaseStats& a, const PhaseStats& b) {
  return a.bytes_sent == b.bytes_sent && a.bytes_received == b.bytes_received &&
         a.rounds == b.rounds && a.triples == b.triples && a.and_gates == b.and_gates &&
         a.cots == b.cots;
}

}  // namespace

bool PhaseStats::matches(const PhaseStats& o, double tol_ms) const {
  return same_counters(*this, o) && std::abs(online_ms - o.online_ms) <= tol_ms &&
         std::abs(offline_ms - o.offline_ms) <= tol_ms;
}

void RunReport::finalize() {
  protocols.clear();
  protocols.push_back({"setup", setup});
  std::map<std::string, std::size_t> pos;
  for (const auto& l : layers) {
    auto [it, fresh] = pos.emplace(l.kind, protocols.size());
    if (fresh) protocols.push_back({l.kind, {}});
    protocols[it->second].stats += l.stats;
  }
  total = PhaseStats{};
  for (const auto& p : protocols) total += p.stats;
}

bool RunReport::consistent(double tol_ms) const {
  PhaseStats parts = setup;
  for (const auto& l : layers) parts += l.stats;
  PhaseStats by_protocol;
  for (const auto& p : protocols) by_protocol += p.stats;
  if (!parts.matches(total, tol_ms) || !by_protocol.matches(total, tol_ms)) return false;
  if (tags.empty()) return true;
  PhaseStats by_tag;
  for (const auto& t : tags) by_tag += t.stats;
  return same_counters(by_tag, total);
}

ReportFormat parse_report_format(const std::string& s) {
  if (s == "text") return ReportFormat::kText;
  if (s == "json") return ReportFormat::kJson;
  if (s == "csv") return ReportFormat::kCsv;
  throw ConfigError("unknown report format '" + s + "' (text, json, csv)");
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json to_json(const PhaseStats& s) {
  return json{{"online_ms", s.online_ms},       {"offline_ms", s.offline_ms},
              {"bytes_sent", s.bytes_sent},     {"bytes_received", s.bytes_received},
              {"rounds", s.rounds},             {"triples", s.triples},
              {"and_gates", s.and_gates},       {"cots", s.cots}};
}

PhaseStats stats_from_json(const json& j) {
  PhaseStats s;
  s.online_ms = j.at("online_ms").get<double>();
  s.offline_ms = j.at("offline_ms").get<double>();
  s.bytes_sent = j.at("bytes_sent").get<std::uint64_t>();
  s.bytes_received = j.at("bytes_received").get<std::uint64_t>();
  s.rounds = j.at("rounds").get<std::uint64_t>();
  s.triples = j.at("triples").get<std::uint64_t>();
  s.and_gates = j.at("and_gates").get<std::uint64_t>();
  s.cots = j.at("cots").get<std::uint64_t>();
  return s;
}

json named_to_json(const std::vector<NamedStats>& v) {
  json a = json::array();
  for (const auto& n : v) {
    json e = to_json(n.stats);
    e["name"] = n.name;
    a.push_back(e);
  }
  return a;
}

std::vector<NamedStats> named_from_json(const json& a) {
  std::vector<NamedStats> v;
  for (const auto& e : a) v.push_back({e.at("name").get<std::string>(), stats_from_json(e)});
  return v;
}

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
std::optional<T> get_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

std::string to_json_text(const RunReport& r) {
  json j;
  j["program"] = r.program;
  j["party"] = r.party;
  j["mill"] = r.mill;
  j["backend"] = r.backend;
  j["setup"] = to_json(r.setup);
  json layers = json::array();
  for (const auto& l : r.layers) {
    json e = to_json(l.stats);
    e["index"] = l.index;
    e["kind"] = l.kind;
    e["in_shape"] = l.in_shape;
    e["out_shape"] = l.out_shape;
    e["triple_demand"] = l.triple_demand;
    e["cot_demand"] = l.cot_demand;
    e["online_refills"] = l.online_refills;
    layers.push_back(e);
  }
  j["layers"] = layers;
  j["protocols"] = named_to_json(r.protocols);
  j["tags"] = named_to_json(r.tags);
  j["total"] = to_json(r.total);
  put_optional(j, "label", r.label);
  j["logits"] = r.logits;
  j["oracle_logits"] = r.oracle_logits;
  put_optional(j, "oracle_label", r.oracle_label);
  put_optional(j, "mape", r.mape);
  put_optional(j, "max_deviation", r.max_deviation);
  put_optional(j, "deviation_bound", r.deviation_bound);
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

}  // namespace

RunReport parse_report_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    RunReport r;
    r.program = j.at("program").get<std::string>();
    r.party = j.at("party").get<std::string>();
    r.mill = j.at("mill").get<std::string>();
    r.backend = j.at("backend").get<std::string>();
    r.setup = stats_from_json(j.at("setup"));
    for (const auto& e : j.at("layers")) {
      LayerRecord l;
      l.index = e.at("index").get<std::uint32_t>();
      l.kind = e.at("kind").get<std::string>();
      l.in_shape = e.at("in_shape").get<std::string>();
      l.out_shape = e.at("out_shape").get<std::string>();
      l.stats = stats_from_json(e);
      l.triple_demand = e.at("triple_demand").get<std::uint64_t>();
      l.cot_demand = e.at("cot_demand").get<std::uint64_t>();
      l.online_refills = e.at("online_refills").get<std::uint64_t>();
      r.layers.push_back(std::move(l));
    }
    r.protocols = named_from_json(j.at("protocols"));
    r.tags = named_from_json(j.at("tags"));
    r.total = stats_from_json(j.at("total"));
    r.label = get_optional<std::uint64_t>(j, "label");
    r.logits = j.at("logits").get<std::vector<std::int64_t>>();
    r.oracle_logits = j.at("oracle_logits").get<std::vector<std::int64_t>>();
    r.oracle_label = get_optional<std::uint64_t>(j, "oracle_label");
    r.mape = get_optional<double>(j, "mape");
    r.max_deviation = get_optional<std::uint64_t>(j, "max_deviation");
    r.deviation_bound = get_optional<std::uint64_t>(j, "deviation_bound");
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("report json: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Text and CSV

namespace {

void text_row(std::ostringstream& os, const std::string& name, const PhaseStats& s) {
  os << std::left << std::setw(22) << name << std::right << std::fixed << std::setprecision(2)
     << std::setw(11) << s.online_ms << std::setw(11) << s.offline_ms << std::setw(13)
     << s.bytes_sent << std::setw(13) << s.bytes_received << std::setw(8) << s.rounds
     << std::setw(11) << s.triples << std::setw(11) << s.and_gates << std::setw(9) << s.cots
     << "\n";
}

void text_header(std::ostringstream& os, const char* first) {
  os << std::left << std::setw(22) << first << std::right << std::setw(11) << "online_ms"
     << std::setw(11) << "offline_ms" << std::setw(13) << "sent_B" << std::setw(13) << "recv_B"
     << std::setw(8) << "rounds" << std::setw(11) << "triples" << std::setw(11) << "ands"
     << std::setw(9) << "cots" << "\n";
}

std::string to_text(const RunReport& r) {
  std::ostringstream os;
  os << "program " << r.program << "  party " << r.party << "  mill " << r.mill << "  triples "
     << r.backend << "\n\n";
  text_header(os, "layer");
  text_row(os, "setup", r.setup);
  for (const auto& l : r.layers) {
    text_row(os, std::to_string(l.index) + " " + l.kind + " " + l.out_shape, l.stats);
  }
  os << "\n";
  text_header(os, "protocol");
  for (const auto& p : r.protocols) text_row(os, p.name, p.stats);
  text_row(os, "total", r.total);
  if (!r.tags.empty()) {
    os << "\n";
    text_header(os, "wire tag");
    for (const auto& t : r.tags) text_row(os, t.name, t.stats);
  }
  os << "\ndemand per layer (triples / cots):";
  for (const auto& l : r.layers) {
    if (l.triple_demand || l.cot_demand) {
      os << "  " << l.index << ":" << l.triple_demand << "/" << l.cot_demand;
    }
  }
  os << "\n";
  if (r.label) os << "label " << *r.label << "\n";
  if (r.oracle_label) os << "oracle label " << *r.oracle_label << "\n";
  if (!r.logits.empty()) {
    os << "logits";
    for (auto v : r.logits) os << " " << v;
    os << "\n";
  }
  if (r.max_deviation) {
    os << "max logit deviation " << *r.max_deviation;
    if (r.deviation_bound) os << " (bound " << *r.deviation_bound << ")";
    os << "\n";
  }
  if (r.mape) os << "logit MAPE " << std::setprecision(6) << *r.mape * 100 << "%\n";
  for (const auto& w : r.warnings) os << "warning: " << w << "\n";
  return os.str();
}

void csv_row(std::ostringstream& os, const std::string& section, const std::string& name,
             const PhaseStats& s) {
  os << section << "," << name << "," << std::setprecision(17) << s.online_ms << ","
     << s.offline_ms << "," << s.bytes_sent << "," << s.bytes_received << "," << s.rounds << ","
     << s.triples << "," << s.and_gates << "," << s.cots << "\n";
}

std::string to_csv(const RunReport& r) {
  std::ostringstream os;
  os << "section,name,online_ms,offline_ms,bytes_sent,bytes_received,rounds,triples,and_gates,"
        "cots\n";
  csv_row(os, "setup", "setup", r.setup);
  for (const auto& l : r.layers) csv_row(os, "layer", std::to_string(l.index) + ":" + l.kind, l.stats);
  for (const auto& p : r.protocols) csv_row(os, "protocol", p.name, p.stats);
  for (const auto& t : r.tags) csv_row(os, "tag", t.name, t.stats);
  csv_row(os, "total", "total", r.total);
  return os.str();
}

}  // namespace

std::string format_report(const RunReport& r, ReportFormat f) {
  switch (f) {
    case ReportFormat::kText: return to_text(r);
    case ReportFormat::kJson: return to_json_text(r);
    case ReportFormat::kCsv: return to_csv(r);
  }
  return {};
}

}  // namespace seconnds
