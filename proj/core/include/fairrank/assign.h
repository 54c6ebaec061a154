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

#ifndef FAIRRANK_ASSIGN_H_
#define FAIRRANK_ASSIGN_H_

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace fairrank {

// Tolerance for the quality side constraint.
inline constexpr double kFeasibilityTolerance = 1e-9;

inline constexpr double kForbidden = std::numeric_limits<double>::infinity();

// Square K x K matrix; rows are candidates, columns are positions. Entries
// equal to kForbidden mark edges that may not be used.
class CostMatrix {
 public:
  CostMatrix() = default;
  explicit CostMatrix(std::size_t k, double fill = 0.0)
      : k_(k), values_(k * k, fill) {}
  explicit CostMatrix(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return k_; }
  double& operator()(std::size_t row, std::size_t col) {
    return values_[row * k_ + col];
  }
  double operator()(std::size_t row, std::size_t col) const {
    return values_[row * k_ + col];
  }

  // Submatrix on the given rows and columns (in the given order).
  CostMatrix Select(std::span<const std::size_t> rows,
                    std::span<const std::size_t> cols) const;

 private:
  std::size_t k_ = 0;
  std::vector<double> values_;
};

// Quality side constraint: the sum of gain(i, column_of[i]) must be at least
// target - tolerance.
struct QualityConstraint {
  CostMatrix gain;
  double target = 0.0;
  double tolerance = kFeasibilityTolerance;

  // DCG gains rel_i / log2(j+1) for positions j <= depth, 0 beyond.
  static QualityConstraint Dcg(std::span<const double> relevance,
                               double target,
                               std::size_t depth =
                                   std::numeric_limits<std::size_t>::max());
  // No constraint: zero gains, zero target.
  static QualityConstraint None(std::size_t k);

  double Value(std::span<const std::size_t> column_of) const;
  bool Satisfied(double value) const { return value >= target - tolerance; }
};

struct MatchResult {
  std::vector<std::size_t> column_of;  // row -> column
  double objective = 0.0;
  double quality = 0.0;  // total gain of the matching
  bool feasible = false;
  bool proven_optimal = true;
};

// Minimum-total-cost perfect matching over non-forbidden edges.
MatchResult HungarianMinCost(const CostMatrix& costs);

using EdgePredicate = std::function<bool(std::size_t, std::size_t)>;

// Perfect matching over allowed edges maximizing total gain. `objective` and
// `quality` both hold the total gain.
MatchResult MaxGainMatching(const CostMatrix& gain,
                            const EdgePredicate& allowed);

// Max-DCG perfect matching of candidates with the given relevance onto
// positions 1..K over allowed edges.
MatchResult MaxDcgMatching(const EdgePredicate& allowed,
                           std::span<const double> relevance,
                           std::size_t depth =
                               std::numeric_limits<std::size_t>::max());

// Minimizes max_i d(i, column_of[i]) subject to the quality constraint;
// among bottleneck-optimal matchings returns one of maximal quality.
MatchResult BottleneckWithQuality(const CostMatrix& d,
                                  const QualityConstraint& quality);

// Greedy refinement of a bottleneck-optimal `base` towards a
// lexicographically smaller sorted (descending) divergence vector. Keeps the
// bottleneck value and the quality constraint; returns `base` if refinement
// does not improve on it.
MatchResult LexicographicRefine(const CostMatrix& d,
                                const QualityConstraint& quality,
                                const MatchResult& base);

struct MinSumOptions {
  // Branch-and-bound node budget. 0 = unlimited up to K = 20 and 200000
  // nodes beyond.
  std::size_t node_limit = 0;
};

// Minimum-total-cost perfect matching subject to the quality constraint.
// Lagrangian bisection on the constraint multiplier, then depth-first
// branch-and-bound when the duality gap is not closed.
MatchResult ConstrainedMinSum(const CostMatrix& costs,
                              const QualityConstraint& quality,
                              MinSumOptions options = {});

enum class MatchObjective { kMinMax, kMinSum, kLexMax };

inline constexpr std::size_t kBruteForceMaxSize = 8;

// Exhaustive K! enumeration (K <= 8, kPrecondition otherwise). Ties on the
// objective go to the higher-quality matching. For kLexMax the objective
// reported is the bottleneck.
MatchResult BruteForce(MatchObjective objective, const CostMatrix& matrix,
                       const QualityConstraint& quality);

// Edge values along a matching, sorted descending.
std::vector<double> SortedEdgeValues(const CostMatrix& matrix,
                                     std::span<const std::size_t> column_of);

}  // namespace fairrank

#endif  // FAIRRANK_ASSIGN_H_
