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

#ifndef FAIRRANK_LEDGER_H_
#define FAIRRANK_LEDGER_H_

#include <cstddef>
#include <vector>

#include "fairrank/attention.h"
#include "fairrank/dataset.h"
#include "fairrank/ranking.h"

namespace fairrank {

// kAware scales every accrual by the query polarity; kAgnostic treats every
// polarity as 1.
enum class PolarityMode { kAware, kAgnostic };

// Running moments of one individual's cumulative attention and relevance for
// one polarity component. Attention at a position is a Bernoulli(a) draw, so
// a query adds eta*a to the mean and eta^2*a*(1-a) to the variance of the
// cumulative sum; relevance accrues the same way.
struct Accrual {
  double mean_attn = 0.0;
  double var_attn = 0.0;
  double mean_rel = 0.0;
  double var_rel = 0.0;
  std::vector<double> seq_attn;
  std::vector<double> seq_rel;

  void AddAttention(double eta, double attention);
  void AddRelevance(double eta, double relevance);

  friend bool operator==(const Accrual&, const Accrual&) = default;
};

// Per-individual cumulative state over the processed prefix of a stream.
// Keeps a polarity-aware track with one Accrual per (individual, component)
// and a polarity-agnostic track with one Accrual per individual.
class Ledger {
 public:
  Ledger() = default;
  Ledger(std::size_t n, std::size_t components);

  std::size_t size() const { return n_; }
  std::size_t components(PolarityMode mode) const {
    return mode == PolarityMode::kAware ? components_ : 1;
  }
  std::size_t queries_processed() const { return queries_; }

  const Accrual& cell(std::size_t i, std::size_t p, PolarityMode mode) const {
    return mode == PolarityMode::kAware ? aware_[i * components_ + p]
                                        : agnostic_[i];
  }

  // Accrues one query ranked by `assignment`. Throws kLengthMismatch when
  // the polarity length differs from components(kAware) and kValidation
  // when the assignment or attention model does not cover the individuals.
  void Update(const QueryEvent& query, const Assignment& assignment,
              const AttentionModel& attention);

  friend bool operator==(const Ledger&, const Ledger&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t components_ = 1;
  std::size_t queries_ = 0;
  std::vector<Accrual> aware_;
  std::vector<Accrual> agnostic_;
};

// Sample standard deviation (Bessel-corrected) of a value sequence; 0 for
// fewer than two values.
double SampleStd(const std::vector<double>& values);

}  // namespace fairrank

#endif  // FAIRRANK_LEDGER_H_
