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

#include "fairrank/ledger.h"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "expect_error.h"
#include "fairrank/rerank.h"
#include "fairrank/synth.h"
#include "scenarios.h"

namespace fairrank {
namespace {

using testing::MakeQuery;

constexpr double kTop3 = 0.46927872602275644;  // first of three weights

TEST(LedgerTest, PositiveQueryAccruesTopWeight) {
  Ledger ledger(3, 1);
  ledger.Update(MakeQuery("q", 1, {0.5, 0.3, 0.2}), Assignment({0, 1, 2}),
                AttentionModel(3, 3));
  const Accrual& cell = ledger.cell(0, 0, PolarityMode::kAware);
  EXPECT_NEAR(cell.mean_attn, kTop3, 1e-12);
  EXPECT_NEAR(cell.var_attn, kTop3 * (1 - kTop3), 1e-12);
  EXPECT_DOUBLE_EQ(cell.mean_rel, 0.5);
  EXPECT_DOUBLE_EQ(cell.var_rel, 0.25);
  EXPECT_EQ(ledger.queries_processed(), 1u);
}

TEST(LedgerTest, NegativeQueryFlipsMeanButNotVariance) {
  Ledger ledger(3, 1);
  ledger.Update(MakeQuery("q", 1, {0.5, 0.3, 0.2}, {-1.0}),
                Assignment({0, 1, 2}), AttentionModel(3, 3));
  const Accrual& cell = ledger.cell(0, 0, PolarityMode::kAware);
  EXPECT_NEAR(cell.mean_attn, -kTop3, 1e-12);
  EXPECT_NEAR(cell.var_attn, 0.24905620333, 1e-10);
  EXPECT_EQ(cell.seq_attn, std::vector<double>{-kTop3});
  EXPECT_NEAR(ledger.cell(0, 0, PolarityMode::kAgnostic).mean_attn, kTop3,
              1e-12);
}

TEST(LedgerTest, ZeroPolarityLeavesAwareTrackFlat) {
  Ledger ledger(2, 1);
  ledger.Update(MakeQuery("q", 1, {0.5, 0.5}, {0.0}), Assignment({0, 1}),
                AttentionModel(2, 2));
  for (std::size_t i = 0; i < 2; ++i) {
    const Accrual& aware = ledger.cell(i, 0, PolarityMode::kAware);
    EXPECT_EQ(aware.mean_attn, 0.0);
    EXPECT_EQ(aware.var_attn, 0.0);
    EXPECT_EQ(aware.mean_rel, 0.0);
    EXPECT_GT(ledger.cell(i, 0, PolarityMode::kAgnostic).mean_attn, 0.0);
  }
}

TEST(LedgerTest, MultiComponentPolarity) {
  Ledger ledger(2, 2);
  ledger.Update(MakeQuery("q", 1, {0.5, 0.5}, {1.0, -0.5}),
                Assignment({0, 1}), AttentionModel::FromWeights({1.0, 0.0}));
  EXPECT_EQ(ledger.components(PolarityMode::kAware), 2u);
  EXPECT_EQ(ledger.components(PolarityMode::kAgnostic), 1u);
  EXPECT_DOUBLE_EQ(ledger.cell(0, 1, PolarityMode::kAware).mean_attn, -0.5);
  EXPECT_DOUBLE_EQ(ledger.cell(0, 1, PolarityMode::kAware).mean_rel, -0.25);
}

TEST(LedgerTest, PolarityLengthMismatch) {
  Ledger ledger(2, 1);
  EXPECT_FAIRRANK_ERROR(
      ledger.Update(MakeQuery("q", 1, {0.5, 0.5}, {1.0, 1.0}),
                    Assignment({0, 1}), AttentionModel(2, 2)),
      ErrorCode::kLengthMismatch);
}

TEST(LedgerTest, UnitPolarityTracksAreBitwiseEqual) {
  const SynthData data =
      GenerateRandomInstance(9, 3, 6, PolarityLaw::kUnit, 17);
  const AttentionModel attention(9, 4);
  Ledger ledger(9, 1);
  for (const QueryEvent& q : data.stream) {
    ledger.Update(q, Assignment(IdealRanking(q)), attention);
  }
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(ledger.cell(i, 0, PolarityMode::kAware),
              ledger.cell(i, 0, PolarityMode::kAgnostic));
  }
}

TEST(LedgerTest, AgnosticMeanMatchesRecomputation) {
  const SynthData data =
      GenerateRandomInstance(7, 2, 8, PolarityLaw::kContinuous, 3);
  const AttentionModel attention(7, 5);
  Ledger ledger(7, 1);
  std::vector<double> expected(7, 0.0);
  for (std::size_t t = 0; t < data.stream.size(); ++t) {
    std::vector<std::size_t> order = IdealRanking(data.stream[t]);
    std::rotate(order.begin(), order.begin() + t % 7, order.end());
    const Assignment a(order);
    ledger.Update(data.stream[t], a, attention);
    for (std::size_t pos = 1; pos <= 7; ++pos) {
      expected[a.at(pos)] += attention.weights()[pos - 1];
    }
  }
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_NEAR(ledger.cell(i, 0, PolarityMode::kAgnostic).mean_attn,
                expected[i], 1e-12);
  }
}

TEST(SampleStdTest, BesselCorrected) {
  EXPECT_EQ(SampleStd({}), 0.0);
  EXPECT_EQ(SampleStd({3.0}), 0.0);
  EXPECT_NEAR(SampleStd({1.0, 2.0, 3.0, 4.0}), std::sqrt(5.0 / 3.0), 1e-12);
}

}  // namespace
}  // namespace fairrank
