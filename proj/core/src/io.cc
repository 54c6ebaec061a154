// Copyright 2026 The fairrank Authors.
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

#include "fairrank/io.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "fairrank/error.h"
#include "json.hpp"

namespace fairrank {
namespace {

using Json = nlohmann::ordered_json;

constexpr char kRunFormat[] = "fairrank-run/1";
constexpr char kReportFormat[] = "fairrank-report/1";
constexpr double kLoadTolerance = 1e-6;

std::ifstream OpenInput(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

[[noreturn]] void ParseFail(std::size_t line, const std::string& message) {
  throw Error(ErrorCode::kParse,
              "line " + std::to_string(line) + ": " + message);
}

Json QueryToJson(const Dataset& dataset, const QueryEvent& query) {
  Json j;
  j["query_id"] = query.query_id;
  j["t"] = query.t;
  j["polarity"] = query.polarity;
  Json rel = Json::object();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    rel[dataset.id(i)] = query.relevance[i];
  }
  j["relevance"] = std::move(rel);
  return j;
}

// Raw record before the individual set is known.
struct RawQuery {
  QueryEvent event;
  std::vector<std::pair<std::string, double>> relevance;
};

RawQuery QueryFromJson(const Json& j, std::size_t line) {
  if (!j.is_object()) ParseFail(line, "record is not a JSON object");
  for (const char* key : {"query_id", "t", "polarity", "relevance"}) {
    if (!j.contains(key)) ParseFail(line, std::string("missing '") + key + "'");
  }
  RawQuery raw;
  if (!j["query_id"].is_string()) ParseFail(line, "'query_id' must be a string");
  raw.event.query_id = j["query_id"].get<std::string>();
  if (!j["t"].is_number_integer()) ParseFail(line, "'t' must be an integer");
  raw.event.t = j["t"].get<std::int64_t>();
  const Json& pol = j["polarity"];
  raw.event.polarity.clear();
  if (pol.is_number()) {
    raw.event.polarity.push_back(pol.get<double>());
  } else if (pol.is_array()) {
    for (const Json& v : pol) {
      if (!v.is_number()) ParseFail(line, "'polarity' entries must be numbers");
      raw.event.polarity.push_back(v.get<double>());
    }
  } else {
    ParseFail(line, "'polarity' must be a number or an array of numbers");
  }
  if (!j["relevance"].is_object()) {
    ParseFail(line, "'relevance' must be an object");
  }
  for (const auto& [id, v] : j["relevance"].items()) {
    if (!v.is_number()) ParseFail(line, "relevance of '" + id + "' is not a number");
    raw.relevance.emplace_back(id, v.get<double>());
  }
  return raw;
}

Json ConfigToJson(const RerankConfig& c) {
  Json j;
  j["kind"] = std::string(DivergenceKindName(c.kind));
  j["objective"] = std::string(RerankObjectiveName(c.objective));
  j["theta"] = c.theta;
  j["prefilter_depth"] = c.prefilter_depth;
  j["attention_cutoff"] = c.attention_cutoff;
  j["eval_depth"] = c.eval_depth;
  j["polarity_mode"] = std::string(PolarityModeName(c.polarity_mode));
  j["seed"] = c.seed;
  return j;
}

RerankConfig ConfigFromJson(const Json& j) {
  RerankConfig c;
  const auto kind = ParseDivergenceKind(j.at("kind").get<std::string>());
  const auto objective =
      ParseRerankObjective(j.at("objective").get<std::string>());
  const auto mode = ParsePolarityMode(j.at("polarity_mode").get<std::string>());
  if (!kind || !objective || !mode) {
    throw Error(ErrorCode::kParse, "run file has an unknown config value");
  }
  c.kind = *kind;
  c.objective = *objective;
  c.polarity_mode = *mode;
  c.theta = j.at("theta").get<double>();
  c.prefilter_depth = j.at("prefilter_depth").get<std::size_t>();
  c.attention_cutoff = j.at("attention_cutoff").get<std::size_t>();
  c.eval_depth = j.at("eval_depth").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

Json Number(std::optional<double> value) {
  if (!value || !std::isfinite(*value)) return "undefined";
  return RoundSignificant(*value);
}

std::uint64_t Fnv1a(std::string_view text, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

StreamData ParseStream(std::istream& in, bool raw) {
  StreamData data;
  std::vector<RawQuery> records;
  std::vector<std::size_t> lines;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      ParseFail(line, e.what());
    }
    records.push_back(QueryFromJson(j, line));
    lines.push_back(line);
  }

  std::vector<std::string> ids;
  if (!records.empty()) {
    for (const auto& [id, v] : records.front().relevance) ids.push_back(id);
  }
  data.dataset = Dataset::SingleGroup(ids);
  const std::size_t n = data.dataset.size();

  const std::size_t components =
      records.empty() ? 1 : records.front().event.polarity.size();
  for (std::size_t k = 0; k < records.size(); ++k) {
    RawQuery& rec = records[k];
    const std::string where = "line " + std::to_string(lines[k]) + ": ";
    if (rec.relevance.size() != n) {
      throw Error(ErrorCode::kCoverage,
                  where + "query ranks " + std::to_string(rec.relevance.size()) +
                      " individuals, the stream has " + std::to_string(n));
    }
    rec.event.relevance.assign(n, 0.0);
    double total = 0.0;
    for (const auto& [id, v] : rec.relevance) {
      const auto index = data.dataset.index_of(id);
      if (!index) {
        throw Error(ErrorCode::kCoverage,
                    where + "individual '" + id + "' is not ranked by the first query");
      }
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::kValidation,
                    where + "relevance must be finite and non-negative");
      }
      rec.event.relevance[*index] = v;
      total += v;
    }
    if (std::abs(total - 1.0) > kRelevanceSumTolerance) {
      if (std::abs(total - 1.0) > kLoadTolerance) {
        if (!raw) {
          throw Error(ErrorCode::kValidation,
                      where + "relevance sums to " + std::to_string(total) +
                          " (use raw mode to renormalize)");
        }
        data.warnings.push_back(where + "relevance renormalized from sum " +
                                std::to_string(total));
      }
      if (total == 0.0) {
        throw Error(ErrorCode::kValidation, where + "relevance is all zero");
      }
      for (double& r : rec.event.relevance) r /= total;
    }
    if (k > 0 && rec.event.t <= data.stream.back().t) {
      throw Error(ErrorCode::kValidation,
                  where + "timestep " + std::to_string(rec.event.t) +
                      " does not increase");
    }
    if (rec.event.polarity.size() != components) {
      throw Error(ErrorCode::kValidation,
                  where + "polarity length differs from the first query");
    }
    try {
      ValidateQuery(rec.event, data.dataset);
    } catch (const Error& e) {
      throw Error(ErrorCode::kValidation, where + e.what());
    }
    data.stream.push_back(std::move(rec.event));
  }
  return data;
}

StreamData LoadStream(const std::filesystem::path& path, bool raw) {
  std::ifstream in = OpenInput(path);
  return ParseStream(in, raw);
}

std::string SerializeQuery(const Dataset& dataset, const QueryEvent& query) {
  return QueryToJson(dataset, query).dump();
}

void WriteStream(std::ostream& out, const Dataset& dataset,
                 std::span<const QueryEvent> stream) {
  for (const QueryEvent& q : stream) out << SerializeQuery(dataset, q) << '\n';
}

Dataset ParseGroups(std::istream& in, const Dataset& skeleton) {
  std::string text;
  std::size_t line = 0;
  if (!std::getline(in, text)) {
    throw Error(ErrorCode::kParse, "groups file is empty");
  }
  ++line;
  if (!text.empty() && text.back() == '\r') text.pop_back();
  if (text != "individual_id,group_id") {
    ParseFail(line, "expected header 'individual_id,group_id'");
  }
  std::vector<std::string> labels(skeleton.size());
  std::vector<char> seen(skeleton.size(), 0);
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
      ParseFail(line, "expected two comma-separated fields");
    }
    const std::string id = text.substr(0, comma);
    const std::string group = text.substr(comma + 1);
    if (group.empty()) ParseFail(line, "empty group id");
    const auto index = skeleton.index_of(id);
    if (!index) {
      throw Error(ErrorCode::kValidation,
                  "line " + std::to_string(line) + ": unknown individual '" +
                      id + "'");
    }
    if (seen[*index]) {
      throw Error(ErrorCode::kValidation,
                  "line " + std::to_string(line) + ": duplicate individual '" +
                      id + "'");
    }
    seen[*index] = 1;
    labels[*index] = group;
  }
  for (std::size_t i = 0; i < skeleton.size(); ++i) {
    if (!seen[i]) {
      throw Error(ErrorCode::kValidation,
                  "individual '" + skeleton.id(i) + "' has no group");
    }
  }
  return skeleton.WithGroups(labels);
}

Dataset LoadGroups(const std::filesystem::path& path, const Dataset& skeleton) {
  std::ifstream in = OpenInput(path);
  return ParseGroups(in, skeleton);
}

void WriteGroups(std::ostream& out, const Dataset& dataset) {
  out << "individual_id,group_id\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out << dataset.id(i) << ',' << dataset.group_name(dataset.group_of(i))
        << '\n';
  }
}

void WriteRun(std::ostream& out, const Dataset& dataset,
              std::span<const QueryEvent> stream, const RunResult& run) {
  Json j;
  j["format"] = kRunFormat;
  j["config"] = ConfigToJson(run.config);
  Json queries = Json::array();
  for (const QueryEvent& q : stream) queries.push_back(QueryToJson(dataset, q));
  j["stream"] = std::move(queries);
  Json rankings = Json::array();
  for (const Assignment& a : run.assignments) {
    Json order = Json::array();
    for (std::size_t i : a.order()) order.push_back(dataset.id(i));
    rankings.push_back(std::move(order));
  }
  j["rankings"] = std::move(rankings);
  Json reranked = Json::array();
  for (const Assignment& a : run.assignments) reranked.push_back(a.reranked());
  j["reranked"] = std::move(reranked);
  j["ndcg"] = run.ndcg;
  Json fallback = Json::array();
  for (char f : run.fallback) fallback.push_back(f != 0);
  j["fallback"] = std::move(fallback);
  Json trace = Json::array();
  for (double v : run.trace) {
    trace.push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
  }
  j["trace"] = std::move(trace);
  out << j.dump(1) << '\n';
}

LoadedRun ParseRun(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("run file: ") + e.what());
  }
  LoadedRun loaded;
  try {
    if (j.at("format") != kRunFormat) {
      throw Error(ErrorCode::kParse, "not a fairrank run file");
    }
    std::stringstream lines;
    for (const Json& q : j.at("stream")) lines << q.dump() << '\n';
    StreamData data = ParseStream(lines);
    loaded.dataset = std::move(data.dataset);
    loaded.stream = std::move(data.stream);
    RunResult& run = loaded.run;
    run.config = ConfigFromJson(j.at("config"));
    const auto& rankings = j.at("rankings");
    const auto& reranked = j.at("reranked");
    if (rankings.size() != loaded.stream.size() ||
        reranked.size() != loaded.stream.size()) {
      throw Error(ErrorCode::kValidation, "run file needs one ranking per query");
    }
    for (std::size_t t = 0; t < rankings.size(); ++t) {
      std::vector<std::size_t> order;
      for (const Json& id : rankings[t]) {
        const auto index = loaded.dataset.index_of(id.get<std::string>());
        if (!index) {
          throw Error(ErrorCode::kValidation,
                      "ranking names unknown individual " + id.dump());
        }
        order.push_back(*index);
      }
      if (order.size() != loaded.dataset.size()) {
        throw Error(ErrorCode::kValidation, "ranking does not cover the stream");
      }
      run.assignments.emplace_back(std::move(order),
                                   reranked[t].get<std::size_t>());
    }
    run.ndcg = j.at("ndcg").get<std::vector<double>>();
    for (const Json& f : j.at("fallback")) run.fallback.push_back(f.get<bool>() ? 1 : 0);
    for (const Json& v : j.at("trace")) {
      run.trace.push_back(v.is_null() ? std::nan("") : v.get<double>());
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("run file: ") + e.what());
  }
  const AttentionModel attention(loaded.dataset.size(),
                                 loaded.run.config.attention_cutoff);
  loaded.run.ledger = Replay(loaded.stream, loaded.run.assignments, attention);
  return loaded;
}

LoadedRun LoadRun(const std::filesystem::path& path) {
  std::ifstream in = OpenInput(path);
  return ParseRun(in);
}

double RoundSignificant(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return std::strtod(buffer, nullptr);
}

std::string ReportToJson(const MetricsReport& report, const RunResult& run,
                         const std::string& baseline_label) {
  Json j;
  j["format"] = kReportFormat;
  j["config"] = ConfigToJson(run.config);
  j["config"]["theta"] = RoundSignificant(run.config.theta);
  j["queries"] = report.queries;
  j["fallback_count"] = report.fallback_count;
  j["mean_ndcg"] = Number(report.mean_ndcg);
  j["min_ndcg"] = Number(report.min_ndcg);
  Json metrics;
  for (auto [label, values] : {std::pair{"aware", &report.aware},
                               std::pair{"agnostic", &report.agnostic}}) {
    Json panel;
    for (const NamedValue& v : Flatten(*values)) panel[v.name] = Number(v.value);
    metrics[label] = std::move(panel);
  }
  j["metrics"] = std::move(metrics);
  Json fairwashing;
  for (const NamedValue& v : report.fairwashing) fairwashing[v.name] = Number(v.value);
  j["fairwashing"] = std::move(fairwashing);
  j["baseline"] = baseline_label;
  Json improvement = Json::object();
  for (const NamedValue& v : report.relative_improvement) {
    improvement[v.name] = Number(v.value);
  }
  j["relative_improvement"] = std::move(improvement);
  Json per_query;
  Json ndcg = Json::array();
  for (double v : run.ndcg) ndcg.push_back(Number(v));
  per_query["ndcg"] = std::move(ndcg);
  Json fallback = Json::array();
  for (char f : run.fallback) fallback.push_back(f != 0);
  per_query["fallback"] = std::move(fallback);
  Json trace = Json::array();
  for (double v : run.trace) trace.push_back(Number(v));
  per_query["trace"] = std::move(trace);
  j["per_query"] = std::move(per_query);
  return j.dump(2) + "\n";
}

std::pair<std::vector<QueryEvent>, std::vector<QueryEvent>> SplitByQueryId(
    std::span<const QueryEvent> stream, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kPrecondition, "split fraction must be in [0, 1]");
  }
  std::pair<std::vector<QueryEvent>, std::vector<QueryEvent>> out;
  for (const QueryEvent& q : stream) {
    const double u =
        static_cast<double>(Fnv1a(q.query_id, seed) >> 11) * 0x1.0p-53;
    (u < fraction ? out.first : out.second).push_back(q);
  }
  return out;
}

}  // namespace fairrank
