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

#include "fairrank/assign.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "expect_error.h"

namespace fairrank {
namespace {

using Cols = std::vector<std::size_t>;

const std::vector<double> kRelAB = {0.7, 0.3};

TEST(HungarianTest, SymmetricOptimum) {
  const MatchResult r = HungarianMinCost(CostMatrix({{1, 2}, {2, 1}}));
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.column_of, (Cols{0, 1}));
  EXPECT_EQ(r.objective, 2.0);
}

TEST(HungarianTest, CrossMatching) {
  const MatchResult r = HungarianMinCost(CostMatrix({{0, 1}, {0, 2}}));
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.column_of, (Cols{1, 0}));
  EXPECT_EQ(r.objective, 1.0);
}

TEST(HungarianTest, AllForbiddenIsInfeasible) {
  EXPECT_FALSE(HungarianMinCost(CostMatrix(2, kForbidden)).feasible);
}

TEST(HungarianTest, ForbiddenEdgesAvoided) {
  CostMatrix c({{1, 5, 9}, {2, 4, 6}, {3, 1, 2}});
  c(0, 0) = kForbidden;
  const MatchResult r = HungarianMinCost(c);
  ASSERT_TRUE(r.feasible);
  EXPECT_NE(r.column_of[0], 0u);
  EXPECT_EQ(r.objective,
            BruteForce(MatchObjective::kMinSum, c, QualityConstraint::None(3))
                .objective);
}

TEST(HungarianTest, EmptyMatrix) {
  const MatchResult r = HungarianMinCost(CostMatrix(0));
  EXPECT_TRUE(r.feasible);
  EXPECT_TRUE(r.column_of.empty());
}

TEST(MaxDcgMatchingTest, IdealWhenUnconstrained) {
  const MatchResult r =
      MaxDcgMatching([](std::size_t, std::size_t) { return true; }, kRelAB);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.column_of, (Cols{0, 1}));
  EXPECT_NEAR(r.quality, 0.88927892607, 1e-10);
}

TEST(MaxDcgMatchingTest, ForbiddenTopSlot) {
  const MatchResult r = MaxDcgMatching(
      [](std::size_t i, std::size_t j) { return !(i == 0 && j == 0); },
      kRelAB);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.column_of, (Cols{1, 0}));
  EXPECT_NEAR(r.quality, 0.74165082750, 1e-10);
}

TEST(MaxDcgMatchingTest, SingleCandidate) {
  const MatchResult r = MaxDcgMatching(
      [](std::size_t, std::size_t) { return true; }, std::vector<double>{1.0});
  EXPECT_EQ(r.column_of, (Cols{0}));
}

TEST(QualityConstraintTest, DcgGainsAndDepth) {
  const auto q = QualityConstraint::Dcg(kRelAB, 0.5, 1);
  EXPECT_EQ(q.gain(0, 0), 0.7);
  EXPECT_EQ(q.gain(0, 1), 0.0);  // past the depth
  EXPECT_EQ(q.Value(Cols{1, 0}), 0.3);
  EXPECT_FALSE(q.Satisfied(0.3));
  EXPECT_TRUE(q.Satisfied(0.5 - 1e-10));
}

TEST(BottleneckTest, UnconstrainedPicksAntiDiagonal) {
  const CostMatrix d({{0.5, 0.1}, {0.2, 0.6}});
  const MatchResult r = BottleneckWithQuality(d, QualityConstraint::None(2));
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.objective, 0.2);
  EXPECT_EQ(r.column_of, (Cols{1, 0}));
}

TEST(BottleneckTest, IdealTargetPinsMatching) {
  const CostMatrix d({{0.5, 0.1}, {0.2, 0.6}});
  const auto ideal = QualityConstraint::Dcg(kRelAB, 0.7 + 0.3 / std::log2(3.0));
  const MatchResult r = BottleneckWithQuality(d, ideal);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.column_of, (Cols{0, 1}));
  EXPECT_EQ(r.objective, 0.6);
}

TEST(BottleneckTest, ConstantCostsTieBreakToMaxDcg) {
  const MatchResult r = BottleneckWithQuality(
      CostMatrix(3, 0.4), QualityConstraint::Dcg(std::vector<double>{0.2, 0.5, 0.3}, 0.0));
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.objective, 0.4);
  EXPECT_EQ(r.column_of, (Cols{2, 0, 1}));
}

TEST(BottleneckTest, InfeasibleTarget) {
  const MatchResult r = BottleneckWithQuality(
      CostMatrix({{0.5, 0.1}, {0.2, 0.6}}), QualityConstraint::Dcg(kRelAB, 2.0));
  EXPECT_FALSE(r.feasible);
}

TEST(LexicographicRefineTest, ImprovesSecondLargest) {
  const CostMatrix d({{0.5, 0.5}, {0.1, 0.4}});
  const auto none = QualityConstraint::None(2);
  MatchResult base = BottleneckWithQuality(d, none);
  ASSERT_EQ(base.objective, 0.5);
  const MatchResult lex = LexicographicRefine(d, none, base);
  EXPECT_EQ(SortedEdgeValues(d, lex.column_of), (std::vector<double>{0.5, 0.1}));
  EXPECT_EQ(lex.objective, 0.5);
}

TEST(LexicographicRefineTest, UniqueOptimumUnchanged) {
  const CostMatrix d({{0.1, 0.9}, {0.9, 0.2}});
  const auto none = QualityConstraint::None(2);
  const MatchResult base = BottleneckWithQuality(d, none);
  EXPECT_EQ(LexicographicRefine(d, none, base).column_of, base.column_of);
}

TEST(LexicographicRefineTest, SingleRow) {
  const CostMatrix d(1, 0.3);
  const auto none = QualityConstraint::None(1);
  const MatchResult lex =
      LexicographicRefine(d, none, BottleneckWithQuality(d, none));
  EXPECT_EQ(lex.column_of, (Cols{0}));
}

TEST(ConstrainedMinSumTest, InactiveConstraintEqualsHungarian) {
  const CostMatrix c({{4, 1, 3}, {2, 0, 5}, {3, 2, 2}});
  const MatchResult r = ConstrainedMinSum(
      c, QualityConstraint::Dcg(std::vector<double>{0.5, 0.3, 0.2}, 0.0));
  EXPECT_EQ(r.objective, HungarianMinCost(c).objective);
  EXPECT_TRUE(r.proven_optimal);
}

TEST(ConstrainedMinSumTest, QualityForcesTheOtherMatching) {
  // The cheap cross matching puts the relevant candidate second.
  const CostMatrix c({{1.0, 0.0}, {0.0, 1.0}});
  const auto q = QualityConstraint::Dcg(kRelAB, 0.8);
  const MatchResult r = ConstrainedMinSum(c, q);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.column_of, (Cols{0, 1}));
  EXPECT_EQ(r.objective, 2.0);
}

TEST(ConstrainedMinSumTest, TargetAboveIdealIsInfeasible) {
  EXPECT_FALSE(ConstrainedMinSum(CostMatrix(2, 1.0),
                                 QualityConstraint::Dcg(kRelAB, 1.0))
                   .feasible);
}

TEST(BruteForceTest, AgreesOnTwoByTwo) {
  const CostMatrix d({{0.5, 0.1}, {0.2, 0.6}});
  const auto none = QualityConstraint::None(2);
  EXPECT_EQ(BruteForce(MatchObjective::kMinMax, d, none).objective, 0.2);
  EXPECT_EQ(BruteForce(MatchObjective::kMinSum, d, none).objective,
            HungarianMinCost(d).objective);
}

TEST(BruteForceTest, AgreesWithSolversOnRandomFive) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    CostMatrix d(5), c(5);
    std::vector<double> rel(5);
    for (std::size_t i = 0; i < 5; ++i) {
      rel[i] = u(rng);
      for (std::size_t j = 0; j < 5; ++j) {
        d(i, j) = u(rng);
        c(i, j) = u(rng);
      }
    }
    const auto ideal = MaxDcgMatching(
        [](std::size_t, std::size_t) { return true; }, rel);
    const auto q = QualityConstraint::Dcg(rel, u(rng) * ideal.quality);
    EXPECT_NEAR(BottleneckWithQuality(d, q).objective,
                BruteForce(MatchObjective::kMinMax, d, q).objective, 1e-9);
    EXPECT_NEAR(ConstrainedMinSum(c, q).objective,
                BruteForce(MatchObjective::kMinSum, c, q).objective, 1e-9);
  }
}

TEST(BruteForceTest, RejectsLargeInstances) {
  EXPECT_FAIRRANK_ERROR(BruteForce(MatchObjective::kMinMax, CostMatrix(9),
                                   QualityConstraint::None(9)),
                        ErrorCode::kPrecondition);
}

TEST(CostMatrixTest, SelectSubmatrix) {
  const CostMatrix c({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  const Cols rows = {2, 0};
  const Cols cols = {1, 2};
  const CostMatrix s = c.Select(rows, cols);
  EXPECT_EQ(s(0, 0), 8.0);
  EXPECT_EQ(s(1, 1), 3.0);
}

}  // namespace
}  // namespace fairrank
