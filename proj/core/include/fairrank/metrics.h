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

#ifndef FAIRRANK_METRICS_H_
#define FAIRRANK_METRICS_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairrank/dataset.h"
#include "fairrank/divergence.h"
#include "fairrank/ledger.h"

namespace fairrank {

// Max over individuals of the component-summed divergence. Throws
// kEmptyScope on an empty ledger.
double IndividualUnfairness(
    const Ledger& ledger, DivergenceKind kind, PolarityMode mode,
    SigmaConvention sigma = SigmaConvention::kPoissonBinomial);

// Same, restricted to the individuals in `scope` (kEmptyScope if empty).
double IndividualUnfairness(
    const Ledger& ledger, DivergenceKind kind, PolarityMode mode,
    std::span<const std::size_t> scope,
    SigmaConvention sigma = SigmaConvention::kPoissonBinomial);

// Group-level cumulative state: per-query values are member averages, and
// the variance accrues as (1/|g|^2) times the members' summed variance.
// Indexed [group * components + component].
std::vector<Accrual> GroupAccruals(const Ledger& ledger,
                                   const Dataset& dataset, PolarityMode mode);

// Max over groups of the component-summed group divergence.
double GroupUnfairness(
    const Ledger& ledger, const Dataset& dataset, DivergenceKind kind,
    PolarityMode mode,
    SigmaConvention sigma = SigmaConvention::kPoissonBinomial);

// Inequity of amortized attention: sum over individuals of the L1 gap.
double InequityOfAmortizedAttention(const Ledger& ledger, PolarityMode mode);

// Max pairwise difference of the groups' exposure/relevance ratios. Empty
// when some group's average relevance is zero.
std::optional<double> ExposedUtilityRatioGap(const Ledger& ledger,
                                             const Dataset& dataset,
                                             PolarityMode mode);

// Max pairwise difference of the groups' average exposure.
double DemographicParityGap(const Ledger& ledger, const Dataset& dataset,
                            PolarityMode mode);

// (aware - agnostic) / agnostic. Positive values mean fairwashing. Empty
// (infinite fairwashing) when agnostic is 0 and aware is not; 0 when both
// are 0.
std::optional<double> FairwashingDelta(double aware_value,
                                       double agnostic_value);

// (pre - post) / pre. Empty when pre <= 0.
std::optional<double> RelativeImprovement(double pre_value, double post_value);

// Every metric in one polarity mode.
struct ModeMetrics {
  std::array<double, 3> individual{};  // indexed by DivergenceKind
  std::array<double, 3> group{};
  double iaa = 0.0;
  std::optional<double> eur;
  double dp = 0.0;
};

ModeMetrics ComputeModeMetrics(const Ledger& ledger, const Dataset& dataset,
                               PolarityMode mode);

struct NamedValue {
  std::string name;
  std::optional<double> value;  // empty = undefined
};

// Stable, ordered (name, value) listing, e.g. "individual_L1", "eur".
std::vector<NamedValue> Flatten(const ModeMetrics& metrics);

struct MetricsReport {
  ModeMetrics aware;
  ModeMetrics agnostic;
  double mean_ndcg = 1.0;
  double min_ndcg = 1.0;
  std::size_t fallback_count = 0;
  std::size_t queries = 0;
  std::vector<NamedValue> fairwashing;  // per metric, aware vs agnostic
  // Per "<mode>/<metric>" against a baseline run; empty without baseline.
  std::vector<NamedValue> relative_improvement;
};

}  // namespace fairrank

#endif  // FAIRRANK_METRICS_H_
