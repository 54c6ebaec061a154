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

#ifndef FAIRRANK_BOUNDS_H_
#define FAIRRANK_BOUNDS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace fairrank {

// Independent Bernoulli draws X_t ~ Bernoulli(p_t) whose polarity-weighted
// value X_t * eta_t lies in [a_t, b_t].
struct BernoulliStream {
  std::vector<double> probabilities;
  std::vector<std::pair<double, double>> polarity_ranges;

  // Throws kValidation on unequal lengths, p outside [0,1] or a > b.
  void Validate() const;
};

// Relative-deviation tail bound for a sum of independent Bernoullis with
// mean `expected`: min(1, 2 exp(-delta^2 E / (2 + delta))).
// Throws kDomain unless expected > 0 and delta > 0.
double ChernoffBound(double expected, double delta);

// Absolute-deviation tail bound for a sum of independent variables with
// ranges [a_t, b_t]: min(1, 2 exp(-2 delta^2 / sum (b_t - a_t)^2)).
// Throws kDomain unless delta > 0 and some range is non-degenerate.
double HoeffdingBound(std::span<const std::pair<double, double>> ranges,
                      double delta);

enum class TailMode {
  kRelative,  // |S - E[S]| >= delta * E[S]; unit polarities only
  kAbsolute,  // |S - E[S]| >= delta
};

// Fraction of `trials` simulated sums S = sum_t eta_t X_t that deviate from
// their mean by the given threshold. Throws kModeMismatch for kRelative with
// a non-unit polarity, kPrecondition when trials == 0, and kValidation when
// a polarity falls outside its range for X_t = 1.
double MonteCarloTail(const BernoulliStream& stream,
                      std::span<const double> polarities, double delta,
                      TailMode mode, std::size_t trials, std::uint64_t seed);

// Counter-based uniform in [0, 1): a pure function of (seed, counter).
double CounterUniform(std::uint64_t seed, std::uint64_t counter);

}  // namespace fairrank

#endif  // FAIRRANK_BOUNDS_H_
