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
#include <sstream>

#include <gtest/gtest.h>

#include "expect_error.h"
#include "fairrank/synth.h"
#include "json.hpp"
#include "scenarios.h"

namespace fairrank {
namespace {

StreamData Parse(const std::string& text, bool raw = false) {
  std::istringstream in(text);
  return ParseStream(in, raw);
}

constexpr char kTwoQueries[] =
    R"({"query_id":"q1","t":1,"polarity":[1],"relevance":{"b":0.25,"a":0.75}})"
    "\n"
    R"({"query_id":"q2","t":2,"polarity":[-1],"relevance":{"a":0.5,"b":0.5}})"
    "\n";

TEST(ParseStreamTest, WellFormedFile) {
  const StreamData data = Parse(kTwoQueries);
  ASSERT_EQ(data.stream.size(), 2u);
  EXPECT_EQ(data.dataset.ids(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(data.stream[0].relevance, (std::vector<double>{0.75, 0.25}));
  EXPECT_EQ(data.stream[1].polarity, std::vector<double>{-1.0});
  EXPECT_TRUE(data.warnings.empty());
}

TEST(ParseStreamTest, ScalarPolarityAndBlankLines) {
  const StreamData data = Parse(
      "\n"
      R"({"query_id":"q1","t":3,"polarity":0.5,"relevance":{"a":1}})"
      "\n\n");
  ASSERT_EQ(data.stream.size(), 1u);
  EXPECT_EQ(data.stream[0].polarity, std::vector<double>{0.5});
}

TEST(ParseStreamTest, NonIncreasingTimestep) {
  EXPECT_FAIRRANK_ERROR(
      Parse(R"({"query_id":"q1","t":2,"polarity":[1],"relevance":{"a":1}})"
            "\n"
            R"({"query_id":"q2","t":2,"polarity":[1],"relevance":{"a":1}})"),
      ErrorCode::kValidation);
}

TEST(ParseStreamTest, MissingIndividualIsCoverageError) {
  EXPECT_FAIRRANK_ERROR(
      Parse(R"({"query_id":"q1","t":1,"polarity":[1],"relevance":{"a":0.5,"b":0.5}})"
            "\n"
            R"({"query_id":"q2","t":2,"polarity":[1],"relevance":{"a":1}})"),
      ErrorCode::kCoverage);
  EXPECT_FAIRRANK_ERROR(
      Parse(R"({"query_id":"q1","t":1,"polarity":[1],"relevance":{"a":0.5,"b":0.5}})"
            "\n"
            R"({"query_id":"q2","t":2,"polarity":[1],"relevance":{"a":0.5,"c":0.5}})"),
      ErrorCode::kCoverage);
}

TEST(ParseStreamTest, ParseErrorsCarryLineNumbers) {
  try {
    Parse(std::string(kTwoQueries) + "{not json\n");
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_FAIRRANK_ERROR(
      Parse(R"({"query_id":"q1","t":"one","polarity":[1],"relevance":{"a":1}})"),
      ErrorCode::kParse);
  EXPECT_FAIRRANK_ERROR(Parse(R"({"query_id":"q1","t":1,"relevance":{"a":1}})"),
                        ErrorCode::kParse);
}

TEST(ParseStreamTest, NormalizationTolerances) {
  // Within 1e-6: silently renormalized.
  const StreamData close = Parse(
      R"({"query_id":"q","t":1,"polarity":[1],"relevance":{"a":0.5000004,"b":0.5}})");
  EXPECT_NEAR(close.stream[0].relevance[0] + close.stream[0].relevance[1], 1.0,
              1e-15);
  EXPECT_TRUE(close.warnings.empty());
  // Further off: an error unless raw mode renormalizes with a warning.
  const std::string raw_text =
      R"({"query_id":"q","t":1,"polarity":[1],"relevance":{"a":2,"b":6}})";
  EXPECT_FAIRRANK_ERROR(Parse(raw_text), ErrorCode::kValidation);
  const StreamData raw = Parse(raw_text, true);
  EXPECT_EQ(raw.stream[0].relevance, (std::vector<double>{0.25, 0.75}));
  EXPECT_EQ(raw.warnings.size(), 1u);
  EXPECT_FAIRRANK_ERROR(
      Parse(R"({"query_id":"q","t":1,"polarity":[1],"relevance":{"a":-0.5,"b":1.5}})",
            true),
      ErrorCode::kValidation);
}

TEST(StreamRoundTripTest, ByteIdentical) {
  SynthSpec spec;
  spec.variant = SynthVariant::kContinuous;
  spec.n = 12;
  spec.T = 4;
  const SynthData data = GenerateSynth(spec);
  std::ostringstream first;
  WriteStream(first, data.dataset, data.stream);
  const StreamData loaded = Parse(first.str());
  std::ostringstream second;
  WriteStream(second, loaded.dataset, loaded.stream);
  EXPECT_EQ(first.str(), second.str());
}

TEST(GroupsTest, ParseAndWrite) {
  const Dataset skeleton = Dataset::SingleGroup({"a", "b", "c"});
  std::istringstream in("individual_id,group_id\nb,y\na,x\nc,x\n");
  const Dataset grouped = ParseGroups(in, skeleton);
  EXPECT_EQ(grouped.num_groups(), 2u);
  EXPECT_EQ(grouped.group_name(grouped.group_of(1)), "y");
  std::ostringstream out;
  WriteGroups(out, grouped);
  EXPECT_EQ(out.str(), "individual_id,group_id\na,x\nb,y\nc,x\n");
}

TEST(GroupsTest, Errors) {
  const Dataset skeleton = Dataset::SingleGroup({"a", "b"});
  auto parse = [&](const std::string& text) {
    std::istringstream in(text);
    return ParseGroups(in, skeleton);
  };
  EXPECT_FAIRRANK_ERROR(parse("a,x\nb,y\n"), ErrorCode::kParse);
  EXPECT_FAIRRANK_ERROR(parse("individual_id,group_id\na,x\n"),
                        ErrorCode::kValidation);
  EXPECT_FAIRRANK_ERROR(parse("individual_id,group_id\na,x\na,y\nb,y\n"),
                        ErrorCode::kValidation);
  EXPECT_FAIRRANK_ERROR(parse("individual_id,group_id\na,x\nb,y\nz,y\n"),
                        ErrorCode::kValidation);
}

TEST(RunFileTest, RoundTripRebuildsLedger) {
  const SynthData data =
      GenerateRandomInstance(6, 2, 4, PolarityLaw::kSigned, 3);
  RerankConfig config;
  config.prefilter_depth = 5;
  config.attention_cutoff = 3;
  config.kind = DivergenceKind::kW1;
  config.seed = 77;
  const RunResult run = RerankOnline(data.dataset, data.stream, config);
  std::stringstream file;
  WriteRun(file, data.dataset, data.stream, run);
  const LoadedRun loaded = ParseRun(file);
  EXPECT_EQ(loaded.dataset.ids(), data.dataset.ids());
  EXPECT_EQ(loaded.run.assignments, run.assignments);
  EXPECT_EQ(loaded.run.ledger, run.ledger);
  EXPECT_EQ(loaded.run.ndcg, run.ndcg);
  EXPECT_EQ(loaded.run.fallback, run.fallback);
  EXPECT_EQ(loaded.run.config.kind, DivergenceKind::kW1);
  EXPECT_EQ(loaded.run.config.seed, 77u);
}

TEST(RunFileTest, RejectsForeignDocuments) {
  std::stringstream file(R"({"format":"something-else"})");
  EXPECT_FAIRRANK_ERROR(ParseRun(file), ErrorCode::kParse);
}

TEST(ReportTest, KeyOrderRoundingAndUndefined) {
  const auto s = testing::MakeFairwashingScenario();
  RunResult run;
  run.config.prefilter_depth = 2;
  run.config.attention_cutoff = 1;
  run.assignments = s.assignments;
  run.ledger = s.ledger;
  run.ndcg = {1.0, 1.0 / 3.0};
  run.fallback = {0, 1};
  run.trace = {0.5, std::nan("")};
  const MetricsReport report = EvaluateRun(run, s.dataset);
  const std::string text = ReportToJson(report, run, "pass-through");
  EXPECT_EQ(text, ReportToJson(report, run, "pass-through"));
  const auto j = nlohmann::ordered_json::parse(text);
  std::vector<std::string> keys;
  for (const auto& [key, value] : j.items()) keys.push_back(key);
  EXPECT_EQ(keys, (std::vector<std::string>{
                      "format", "config", "queries", "fallback_count",
                      "mean_ndcg", "min_ndcg", "metrics", "fairwashing",
                      "baseline", "relative_improvement", "per_query"}));
  EXPECT_EQ(j["fairwashing"]["individual_L1"], "undefined");
  EXPECT_EQ(j["per_query"]["trace"][1], "undefined");
  EXPECT_EQ(j["per_query"]["ndcg"][1].get<double>(), 0.333333333333);
  EXPECT_EQ(j["metrics"]["aware"]["individual_L1"].get<double>(), 1.0);
}

TEST(RoundSignificantTest, TwelveDigits) {
  EXPECT_EQ(RoundSignificant(1.0 / 3.0), 0.333333333333);
  EXPECT_EQ(RoundSignificant(123456.7890123456), 123456.789012);
  EXPECT_EQ(RoundSignificant(0.0), 0.0);
}

TEST(SplitByQueryIdTest, DeterministicPartition) {
  const SynthData data = GenerateSynthBinary(SynthSpec{});
  const auto [a, b] = SplitByQueryId(data.stream, 0.5, 4);
  EXPECT_EQ(a.size() + b.size(), data.stream.size());
  const auto [a2, b2] = SplitByQueryId(data.stream, 0.5, 4);
  ASSERT_EQ(a.size(), a2.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].query_id, a2[k].query_id);
  }
  EXPECT_TRUE(SplitByQueryId(data.stream, 0.0, 4).first.empty());
  EXPECT_TRUE(SplitByQueryId(data.stream, 1.0, 4).second.empty());
  EXPECT_FAIRRANK_ERROR(SplitByQueryId(data.stream, 1.5, 4),
                        ErrorCode::kPrecondition);
}

}  // namespace
}  // namespace fairrank
