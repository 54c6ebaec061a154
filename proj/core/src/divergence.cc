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

#include "fairrank/divergence.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "fairrank/error.h"

namespace fairrank {
namespace {

DistSummary Summarize(double mean, double variance,
                      const std::vector<double>& seq, SigmaConvention sigma) {
  DistSummary s;
  s.mean = mean;
  s.std = sigma == SigmaConvention::kPoissonBinomial
              ? std::sqrt(std::max(variance, 0.0))
              : SampleStd(seq);
  s.seq = seq;
  std::sort(s.seq.begin(), s.seq.end());
  return s;
}

}  // namespace

std::string_view DivergenceKindName(DivergenceKind kind) {
  switch (kind) {
    case DivergenceKind::kL1: return "L1";
    case DivergenceKind::kL2Var: return "L2Var";
    case DivergenceKind::kW1: return "W1";
  }
  return "?";
}

std::optional<DivergenceKind> ParseDivergenceKind(std::string_view name) {
  auto lower = [](std::string_view text) {
    std::string out(text);
    for (char& c : out) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
  };
  for (DivergenceKind kind : kAllDivergenceKinds) {
    if (lower(DivergenceKindName(kind)) == lower(name)) return kind;
  }
  return std::nullopt;
}

DistSummary SummarizeAttention(const Accrual& cell, SigmaConvention sigma) {
  return Summarize(cell.mean_attn, cell.var_attn, cell.seq_attn, sigma);
}

DistSummary SummarizeRelevance(const Accrual& cell, SigmaConvention sigma) {
  return Summarize(cell.mean_rel, cell.var_rel, cell.seq_rel, sigma);
}

double DistanceL1(const DistSummary& attn, const DistSummary& rel) {
  return std::abs(attn.mean - rel.mean);
}

double DistanceL2Var(const DistSummary& attn, const DistSummary& rel) {
  const double dm = attn.mean - rel.mean;
  const double ds = attn.std - rel.std;
  return dm * dm + ds * ds;
}

double DistanceW1(std::span<const double> attn_sorted,
                  std::span<const double> rel_sorted) {
  if (attn_sorted.size() != rel_sorted.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "W1 needs equal-length sequences, got " +
                    std::to_string(attn_sorted.size()) + " and " +
                    std::to_string(rel_sorted.size()));
  }
  if (attn_sorted.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < attn_sorted.size(); ++k) {
    total += std::abs(attn_sorted[k] - rel_sorted[k]);
  }
  return total / static_cast<double>(attn_sorted.size());
}

double Divergence(DivergenceKind kind, const DistSummary& attn,
                  const DistSummary& rel) {
  switch (kind) {
    case DivergenceKind::kL1: return DistanceL1(attn, rel);
    case DivergenceKind::kL2Var: return DistanceL2Var(attn, rel);
    case DivergenceKind::kW1: return DistanceW1(attn.seq, rel.seq);
  }
  return 0.0;
}

double CellDivergence(const Accrual& cell, DivergenceKind kind,
                      SigmaConvention sigma) {
  switch (kind) {
    case DivergenceKind::kL1:
      return std::abs(cell.mean_attn - cell.mean_rel);
    case DivergenceKind::kL2Var: {
      const auto attn = SummarizeAttention(cell, sigma);
      const auto rel = SummarizeRelevance(cell, sigma);
      return DistanceL2Var(attn, rel);
    }
    case DivergenceKind::kW1: {
      std::vector<double> a = cell.seq_attn;
      std::vector<double> r = cell.seq_rel;
      std::sort(a.begin(), a.end());
      std::sort(r.begin(), r.end());
      return DistanceW1(a, r);
    }
  }
  return 0.0;
}

double CombineComponents(std::span<const double> per_component,
                         std::span<const double> weights) {
  if (!weights.empty() && weights.size() != per_component.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "component weights do not match component count");
  }
  double total = 0.0;
  for (std::size_t p = 0; p < per_component.size(); ++p) {
    total += (weights.empty() ? 1.0 : weights[p]) * per_component[p];
  }
  return total;
}

double IndividualDivergence(const Ledger& ledger, std::size_t individual,
                            DivergenceKind kind, PolarityMode mode,
                            SigmaConvention sigma) {
  const std::size_t components = ledger.components(mode);
  std::vector<double> values(components);
  for (std::size_t p = 0; p < components; ++p) {
    values[p] = CellDivergence(ledger.cell(individual, p, mode), kind, sigma);
  }
  return CombineComponents(values);
}

ProspectiveEvaluator::ProspectiveEvaluator(const Ledger& ledger,
                                           std::size_t individual,
                                           const QueryEvent& query,
                                           DivergenceKind kind,
                                           PolarityMode mode)
    : kind_(kind) {
  const std::size_t components = ledger.components(mode);
  if (mode == PolarityMode::kAware &&
      query.polarity.size() != components) {
    throw Error(ErrorCode::kLengthMismatch,
                "query polarity length differs from ledger components");
  }
  etas_.resize(components);
  cells_.reserve(components);
  for (std::size_t p = 0; p < components; ++p) {
    etas_[p] = mode == PolarityMode::kAware ? query.polarity[p] : 1.0;
    Accrual cell = ledger.cell(individual, p, mode);
    cell.AddRelevance(etas_[p], query.relevance[individual]);
    cells_.push_back(std::move(cell));
  }
}

double ProspectiveEvaluator::Evaluate(double attention_weight) const {
  std::vector<double> values(cells_.size());
  for (std::size_t p = 0; p < cells_.size(); ++p) {
    Accrual cell = cells_[p];
    cell.AddAttention(etas_[p], attention_weight);
    values[p] = CellDivergence(cell, kind_);
  }
  return CombineComponents(values);
}

double ProspectiveDivergence(const Ledger& ledger, std::size_t individual,
                             const QueryEvent& query, std::size_t position,
                             const AttentionModel& attention,
                             DivergenceKind kind, PolarityMode mode) {
  return ProspectiveEvaluator(ledger, individual, query, kind, mode)
      .Evaluate(attention.at_position(position));
}

}  // namespace fairrank
