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

#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace fairrank::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Invoke(std::initializer_list<std::string> args) {
  std::vector<std::string> storage = {"fairrank"};
  storage.insert(storage.end(), args);
  std::vector<const char*> argv;
  for (const std::string& a : storage) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = Main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("fairrank_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("FAIRRANK_SEED");
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Small synthetic stream + groups in dir_.
  void Generate() {
    const Outcome g = Invoke({"generate", "--n", "20", "--T", "6", "--seed", "3",
                           "--out", dir_.string()});
    ASSERT_EQ(g.code, kExitOk) << g.err;
  }
  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  fs::path dir_;
};

TEST_F(CliTest, GenerateWritesStreamAndGroups) {
  Generate();
  EXPECT_TRUE(fs::exists(dir_ / "stream.jsonl"));
  EXPECT_EQ(ReadFile(dir_ / "groups.csv").rfind("individual_id,group_id\n", 0),
            0u);
}

TEST_F(CliTest, RankEvaluatePipeline) {
  Generate();
  const Outcome rank =
      Invoke({"rank", "--stream", Path("stream.jsonl"), "--groups",
           Path("groups.csv"), "--k-re", "8", "--k-att", "4", "--out",
           Path("run.json")});
  ASSERT_EQ(rank.code, kExitOk) << rank.err;
  EXPECT_NE(rank.err.find("ranked 6 queries"), std::string::npos);
  const Outcome eval = Invoke({"evaluate", "--run", Path("run.json"), "--groups",
                            Path("groups.csv")});
  ASSERT_EQ(eval.code, kExitOk) << eval.err;
  EXPECT_NE(eval.out.find("\"format\": \"fairrank-report/1\""),
            std::string::npos);
  EXPECT_NE(eval.out.find("\"baseline\": \"pass-through\""), std::string::npos);
}

TEST_F(CliTest, RankIsBitReproducible) {
  Generate();
  for (const char* name : {"a.json", "b.json"}) {
    const Outcome r = Invoke({"rank", "--stream", Path("stream.jsonl"), "--groups",
                           Path("groups.csv"), "--kind", "W1", "--k-re", "6", "--k-att", "4",
                           "--offline", "--max-sweeps", "2", "--out",
                           Path(name)});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  EXPECT_EQ(ReadFile(dir_ / "a.json"), ReadFile(dir_ / "b.json"));
}

TEST_F(CliTest, EnvironmentSeed) {
  setenv("FAIRRANK_SEED", "5", 1);
  EXPECT_EQ(Invoke({"generate", "--n", "4", "--T", "2", "--out", Path("env")}).code,
            kExitOk);
  EXPECT_EQ(Invoke({"generate", "--n", "4", "--T", "2", "--seed", "5", "--out",
                 Path("flag")})
                .code,
            kExitOk);
  EXPECT_EQ(ReadFile(dir_ / "env" / "stream.jsonl"),
            ReadFile(dir_ / "flag" / "stream.jsonl"));
  setenv("FAIRRANK_SEED", "abc", 1);
  EXPECT_EQ(Invoke({"generate", "--n", "4", "--T", "2", "--out", Path("bad")}).code,
            kExitValidation);
  unsetenv("FAIRRANK_SEED");
}

TEST_F(CliTest, ValidationErrorsExitOne) {
  std::ofstream(dir_ / "bad.jsonl")
      << R"({"query_id":"q","t":2,"polarity":[1],"relevance":{"a":1}})" "\n"
      << R"({"query_id":"r","t":1,"polarity":[1],"relevance":{"a":1}})" "\n";
  const Outcome bad = Invoke({"rank", "--stream", Path("bad.jsonl")});
  EXPECT_EQ(bad.code, kExitValidation);
  EXPECT_NE(bad.err.find("error:"), std::string::npos);
  EXPECT_EQ(Invoke({"rank", "--stream", Path("missing.jsonl")}).code,
            kExitValidation);
  Generate();
  EXPECT_EQ(Invoke({"rank", "--stream", Path("stream.jsonl"), "--kind", "L7"}).code,
            kExitValidation);
  EXPECT_EQ(Invoke({"rank", "--stream", Path("stream.jsonl"), "--theta", "1.5"})
                .code,
            kExitValidation);
  EXPECT_EQ(Invoke({"no-such-command"}).code, kExitValidation);
  EXPECT_EQ(Invoke({"--help"}).code, kExitOk);
}

TEST_F(CliTest, SweepWritesGridInOrder) {
  Generate();
  const Outcome s =
      Invoke({"sweep", "--stream", Path("stream.jsonl"), "--groups",
           Path("groups.csv"), "--thetas", "1,0.8", "--kinds", "L1,W1",
           "--polarity-modes", "aware", "--k-re", "6", "--k-att", "4", "--threads", "2"});
  ASSERT_EQ(s.code, kExitOk) << s.err;
  std::istringstream lines(s.out);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header.rfind("theta\tkind\tobjective\trepeat\tpolarity_mode", 0),
            0u);
  std::vector<std::string> rows;
  for (std::string line; std::getline(lines, line);) rows.push_back(line);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].rfind("1\tL1\t", 0), 0u);
  EXPECT_EQ(rows[3].rfind("0.8\tW1\t", 0), 0u);
  const Outcome again =
      Invoke({"sweep", "--stream", Path("stream.jsonl"), "--groups",
           Path("groups.csv"), "--thetas", "1,0.8", "--kinds", "L1,W1",
           "--polarity-modes", "aware", "--k-re", "6", "--k-att", "4", "--threads", "1"});
  EXPECT_EQ(again.out, s.out);
}

TEST_F(CliTest, SplitPartitionsQueries) {
  Generate();
  const Outcome s = Invoke({"split", "--stream", Path("stream.jsonl"), "--out-a",
                         Path("a.jsonl"), "--out-b", Path("b.jsonl")});
  ASSERT_EQ(s.code, kExitOk) << s.err;
  auto count = [](const fs::path& p) {
    std::ifstream in(p);
    std::size_t lines = 0;
    for (std::string line; std::getline(in, line);) lines += !line.empty();
    return lines;
  };
  EXPECT_EQ(count(dir_ / "a.jsonl") + count(dir_ / "b.jsonl"), 6u);
}

TEST_F(CliTest, VerifySuite) {
  const Outcome v = Invoke({"verify", "--suite", "w1", "--instances", "10"});
  EXPECT_EQ(v.code, kExitOk) << v.out << v.err;
  EXPECT_NE(v.out.find("suite w1: PASS"), std::string::npos);
  EXPECT_EQ(Invoke({"verify", "--suite", "bogus"}).code, kExitValidation);
}

}  // namespace
}  // namespace fairrank::cli
