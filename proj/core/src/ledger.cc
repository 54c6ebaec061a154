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

#include <cmath>
#include <string>

#include "fairrank/error.h"

namespace fairrank {

void Accrual::AddAttention(double eta, double attention) {
  const double value = eta * attention;
  mean_attn += value;
  var_attn += (eta * eta) * (attention * (1.0 - attention));
  seq_attn.push_back(value);
}

void Accrual::AddRelevance(double eta, double relevance) {
  const double value = eta * relevance;
  mean_rel += value;
  var_rel += (eta * eta) * (relevance * (1.0 - relevance));
  seq_rel.push_back(value);
}

Ledger::Ledger(std::size_t n, std::size_t components)
    : n_(n),
      components_(components),
      aware_(n * components),
      agnostic_(n) {
  if (components == 0) {
    throw Error(ErrorCode::kPrecondition, "ledger needs >= 1 component");
  }
}

void Ledger::Update(const QueryEvent& query, const Assignment& assignment,
                    const AttentionModel& attention) {
  if (query.polarity.size() != components_) {
    throw Error(ErrorCode::kLengthMismatch,
                "query has " + std::to_string(query.polarity.size()) +
                    " polarity components, ledger tracks " +
                    std::to_string(components_));
  }
  if (assignment.size() != n_ || query.relevance.size() != n_ ||
      attention.size() != n_) {
    throw Error(ErrorCode::kValidation,
                "ledger update over mismatched individual counts");
  }
  const auto order = assignment.order();
  for (std::size_t p = 0; p < n_; ++p) {
    const std::size_t i = order[p];
    const double a = attention.at_position(p + 1);
    const double r = query.relevance[i];
    for (std::size_t c = 0; c < components_; ++c) {
      Accrual& cell = aware_[i * components_ + c];
      cell.AddAttention(query.polarity[c], a);
      cell.AddRelevance(query.polarity[c], r);
    }
    agnostic_[i].AddAttention(1.0, a);
    agnostic_[i].AddRelevance(1.0, r);
  }
  ++queries_;
}

double SampleStd(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace fairrank
