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

#ifndef FAIRRANK_IO_H_
#define FAIRRANK_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairrank/dataset.h"
#include "fairrank/metrics.h"
#include "fairrank/rerank.h"

namespace fairrank {

// Stream files hold one JSON record per line:
//   {"query_id":"q01","t":1,"polarity":[1],"relevance":{"a":0.5,"b":0.5}}
// Groups files are CSV with the header "individual_id,group_id".

struct StreamData {
  Dataset dataset;  // every individual in one group until groups are loaded
  std::vector<QueryEvent> stream;
  std::vector<std::string> warnings;
};

// Parses a stream. Relevance within 1e-6 of unit mass is renormalized;
// further off it is an error unless `raw` is set, in which case it is
// renormalized with a warning. Throws kParse (with line number),
// kValidation, kStreamOrder or kCoverage.
StreamData ParseStream(std::istream& in, bool raw = false);
StreamData LoadStream(const std::filesystem::path& path, bool raw = false);

std::string SerializeQuery(const Dataset& dataset, const QueryEvent& query);
void WriteStream(std::ostream& out, const Dataset& dataset,
                 std::span<const QueryEvent> stream);

// Returns `skeleton` with the group assignment from the CSV. Every
// individual must appear exactly once.
Dataset ParseGroups(std::istream& in, const Dataset& skeleton);
Dataset LoadGroups(const std::filesystem::path& path, const Dataset& skeleton);
void WriteGroups(std::ostream& out, const Dataset& dataset);

// A run file is self-contained: configuration, the stream it ranked and the
// chosen rankings. Loading replays the rankings to rebuild the ledger.
struct LoadedRun {
  Dataset dataset;
  std::vector<QueryEvent> stream;
  RunResult run;
};

void WriteRun(std::ostream& out, const Dataset& dataset,
              std::span<const QueryEvent> stream, const RunResult& run);
LoadedRun ParseRun(std::istream& in);
LoadedRun LoadRun(const std::filesystem::path& path);

// Structured report; numbers carry 12 significant digits and undefined
// values are written as the string "undefined".
std::string ReportToJson(const MetricsReport& report, const RunResult& run,
                         const std::string& baseline_label);

// Rounds to 12 significant digits.
double RoundSignificant(double value);

// Deterministic split of a stream by hashing query ids: the first stream
// gets roughly `fraction` of the queries.
std::pair<std::vector<QueryEvent>, std::vector<QueryEvent>> SplitByQueryId(
    std::span<const QueryEvent> stream, double fraction, std::uint64_t seed);

}  // namespace fairrank

#endif  // FAIRRANK_IO_H_
