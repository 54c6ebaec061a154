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

#include "fairrank/metrics.h"

#include <algorithm>
#include <cmath>

#include "fairrank/error.h"

namespace fairrank {
namespace {

std::size_t KindIndex(DivergenceKind kind) {
  return static_cast<std::size_t>(kind);
}

// Per-group (component-major) average exposure and relevance.
struct GroupAverages {
  std::vector<double> exposure;
  std::vector<double> relevance;
};

GroupAverages Averages(const Ledger& ledger, const Dataset& dataset,
                       PolarityMode mode, std::size_t component) {
  GroupAverages out;
  for (std::size_t g = 0; g < dataset.num_groups(); ++g) {
    double exposure = 0.0;
    double relevance = 0.0;
    for (std::size_t i : dataset.members(g)) {
      exposure += ledger.cell(i, component, mode).mean_attn;
      relevance += ledger.cell(i, component, mode).mean_rel;
    }
    const double size = static_cast<double>(dataset.members(g).size());
    out.exposure.push_back(exposure / size);
    out.relevance.push_back(relevance / size);
  }
  return out;
}

double MaxPairwiseGap(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

void CheckDataset(const Ledger& ledger, const Dataset& dataset) {
  if (ledger.size() != dataset.size()) {
    throw Error(ErrorCode::kValidation,
                "ledger and dataset disagree on the number of individuals");
  }
}

}  // namespace

double IndividualUnfairness(const Ledger& ledger, DivergenceKind kind,
                            PolarityMode mode, SigmaConvention sigma) {
  if (ledger.size() == 0) {
    throw Error(ErrorCode::kEmptyScope, "ledger has no individuals");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    worst = std::max(worst, IndividualDivergence(ledger, i, kind, mode, sigma));
  }
  return worst;
}

double IndividualUnfairness(const Ledger& ledger, DivergenceKind kind,
                            PolarityMode mode,
                            std::span<const std::size_t> scope,
                            SigmaConvention sigma) {
  if (scope.empty()) {
    throw Error(ErrorCode::kEmptyScope, "unfairness scope is empty");
  }
  double worst = 0.0;
  for (std::size_t i : scope) {
    worst = std::max(worst, IndividualDivergence(ledger, i, kind, mode, sigma));
  }
  return worst;
}

std::vector<Accrual> GroupAccruals(const Ledger& ledger,
                                   const Dataset& dataset, PolarityMode mode) {
  CheckDataset(ledger, dataset);
  const std::size_t components = ledger.components(mode);
  const std::size_t horizon = ledger.queries_processed();
  std::vector<Accrual> groups(dataset.num_groups() * components);
  for (std::size_t g = 0; g < dataset.num_groups(); ++g) {
    const auto& members = dataset.members(g);
    const double size = static_cast<double>(members.size());
    for (std::size_t p = 0; p < components; ++p) {
      Accrual& out = groups[g * components + p];
      out.seq_attn.assign(horizon, 0.0);
      out.seq_rel.assign(horizon, 0.0);
      for (std::size_t i : members) {
        const Accrual& cell = ledger.cell(i, p, mode);
        out.mean_attn += cell.mean_attn;
        out.mean_rel += cell.mean_rel;
        out.var_attn += cell.var_attn;
        out.var_rel += cell.var_rel;
        for (std::size_t t = 0; t < horizon; ++t) {
          out.seq_attn[t] += cell.seq_attn[t];
          out.seq_rel[t] += cell.seq_rel[t];
        }
      }
      out.mean_attn /= size;
      out.mean_rel /= size;
      out.var_attn /= size * size;
      out.var_rel /= size * size;
      for (std::size_t t = 0; t < horizon; ++t) {
        out.seq_attn[t] /= size;
        out.seq_rel[t] /= size;
      }
    }
  }
  return groups;
}

double GroupUnfairness(const Ledger& ledger, const Dataset& dataset,
                       DivergenceKind kind, PolarityMode mode,
                       SigmaConvention sigma) {
  const std::size_t components = ledger.components(mode);
  const auto groups = GroupAccruals(ledger, dataset, mode);
  double worst = 0.0;
  for (std::size_t g = 0; g < dataset.num_groups(); ++g) {
    std::vector<double> values(components);
    for (std::size_t p = 0; p < components; ++p) {
      values[p] = CellDivergence(groups[g * components + p], kind, sigma);
    }
    worst = std::max(worst, CombineComponents(values));
  }
  return worst;
}

double InequityOfAmortizedAttention(const Ledger& ledger, PolarityMode mode) {
  double total = 0.0;
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    total += IndividualDivergence(ledger, i, DivergenceKind::kL1, mode);
  }
  return total;
}

std::optional<double> ExposedUtilityRatioGap(const Ledger& ledger,
                                             const Dataset& dataset,
                                             PolarityMode mode) {
  CheckDataset(ledger, dataset);
  double total = 0.0;
  for (std::size_t p = 0; p < ledger.components(mode); ++p) {
    const auto averages = Averages(ledger, dataset, mode, p);
    std::vector<double> ratios;
    for (std::size_t g = 0; g < averages.exposure.size(); ++g) {
      if (averages.relevance[g] == 0.0) return std::nullopt;
      ratios.push_back(averages.exposure[g] / averages.relevance[g]);
    }
    total += MaxPairwiseGap(ratios);
  }
  return total;
}

double DemographicParityGap(const Ledger& ledger, const Dataset& dataset,
                            PolarityMode mode) {
  CheckDataset(ledger, dataset);
  double total = 0.0;
  for (std::size_t p = 0; p < ledger.components(mode); ++p) {
    total += MaxPairwiseGap(Averages(ledger, dataset, mode, p).exposure);
  }
  return total;
}

std::optional<double> FairwashingDelta(double aware_value,
                                       double agnostic_value) {
  if (agnostic_value == 0.0) {
    if (aware_value == 0.0) return 0.0;
    return std::nullopt;
  }
  return (aware_value - agnostic_value) / agnostic_value;
}

std::optional<double> RelativeImprovement(double pre_value,
                                          double post_value) {
  if (!(pre_value > 0.0)) return std::nullopt;
  return (pre_value - post_value) / pre_value;
}

ModeMetrics ComputeModeMetrics(const Ledger& ledger, const Dataset& dataset,
                               PolarityMode mode) {
  ModeMetrics m;
  for (DivergenceKind kind : kAllDivergenceKinds) {
    m.individual[KindIndex(kind)] = IndividualUnfairness(ledger, kind, mode);
    m.group[KindIndex(kind)] = GroupUnfairness(ledger, dataset, kind, mode);
  }
  m.iaa = InequityOfAmortizedAttention(ledger, mode);
  m.eur = ExposedUtilityRatioGap(ledger, dataset, mode);
  m.dp = DemographicParityGap(ledger, dataset, mode);
  return m;
}

std::vector<NamedValue> Flatten(const ModeMetrics& metrics) {
  std::vector<NamedValue> out;
  for (DivergenceKind kind : kAllDivergenceKinds) {
    out.push_back({"individual_" + std::string(DivergenceKindName(kind)),
                   metrics.individual[KindIndex(kind)]});
  }
  for (DivergenceKind kind : kAllDivergenceKinds) {
    out.push_back({"group_" + std::string(DivergenceKindName(kind)),
                   metrics.group[KindIndex(kind)]});
  }
  out.push_back({"iaa", metrics.iaa});
  out.push_back({"eur", metrics.eur});
  out.push_back({"dp", metrics.dp});
  return out;
}

}  // namespace fairrank
