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

#ifndef FAIRRANK_DIVERGENCE_H_
#define FAIRRANK_DIVERGENCE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fairrank/attention.h"
#include "fairrank/dataset.h"
#include "fairrank/ledger.h"

namespace fairrank {

enum class DivergenceKind { kL1, kL2Var, kW1 };

inline constexpr DivergenceKind kAllDivergenceKinds[] = {
    DivergenceKind::kL1, DivergenceKind::kL2Var, DivergenceKind::kW1};

std::string_view DivergenceKindName(DivergenceKind kind);
std::optional<DivergenceKind> ParseDivergenceKind(std::string_view name);

// How the spread term of L2Var is measured. kPoissonBinomial uses the
// accumulated variance of the cumulative Bernoulli sum; kSequenceSample uses
// the sample standard deviation of the per-query expected values.
enum class SigmaConvention { kPoissonBinomial, kSequenceSample };

// Summary of one cumulative distribution. `seq` is sorted ascending.
struct DistSummary {
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> seq;
};

DistSummary SummarizeAttention(
    const Accrual& cell,
    SigmaConvention sigma = SigmaConvention::kPoissonBinomial);
DistSummary SummarizeRelevance(
    const Accrual& cell,
    SigmaConvention sigma = SigmaConvention::kPoissonBinomial);

// |mu_A - mu_R|
double DistanceL1(const DistSummary& attn, const DistSummary& rel);

// (mu_A - mu_R)^2 + (sigma_A - sigma_R)^2
double DistanceL2Var(const DistSummary& attn, const DistSummary& rel);

// Mean absolute difference of aligned order statistics. Both inputs must be
// sorted ascending and of equal length (kLengthMismatch otherwise).
double DistanceW1(std::span<const double> attn_sorted,
                  std::span<const double> rel_sorted);

double Divergence(DivergenceKind kind, const DistSummary& attn,
                  const DistSummary& rel);

// Divergence between the attention and relevance sides of one ledger cell.
double CellDivergence(
    const Accrual& cell, DivergenceKind kind,
    SigmaConvention sigma = SigmaConvention::kPoissonBinomial);

// Aggregates per-component divergences; uniform weights when `weights` is
// empty.
double CombineComponents(std::span<const double> per_component,
                         std::span<const double> weights = {});

// D(A_i || R_i) summed over the polarity components of `mode`.
double IndividualDivergence(
    const Ledger& ledger, std::size_t individual, DivergenceKind kind,
    PolarityMode mode,
    SigmaConvention sigma = SigmaConvention::kPoissonBinomial);

// Evaluates the divergence one individual would hold after the pending query
// places it at a given position, without touching the ledger. Relevance
// accrual does not depend on the position, so it is folded in once.
class ProspectiveEvaluator {
 public:
  ProspectiveEvaluator(const Ledger& ledger, std::size_t individual,
                       const QueryEvent& query, DivergenceKind kind,
                       PolarityMode mode);

  // Divergence after accruing `attention_weight` for this query.
  double Evaluate(double attention_weight) const;

 private:
  DivergenceKind kind_;
  std::vector<double> etas_;
  std::vector<Accrual> cells_;
};

double ProspectiveDivergence(const Ledger& ledger, std::size_t individual,
                             const QueryEvent& query, std::size_t position,
                             const AttentionModel& attention,
                             DivergenceKind kind, PolarityMode mode);

}  // namespace fairrank

#endif  // FAIRRANK_DIVERGENCE_H_
