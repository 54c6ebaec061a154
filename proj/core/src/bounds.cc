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

#include "fairrank/bounds.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairrank/error.h"

namespace fairrank {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void BernoulliStream::Validate() const {
  if (probabilities.size() != polarity_ranges.size()) {
    throw Error(ErrorCode::kValidation,
                "probabilities and polarity ranges differ in length");
  }
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kValidation, "probability outside [0, 1]");
    }
  }
  for (const auto& [a, b] : polarity_ranges) {
    if (!(a <= b)) throw Error(ErrorCode::kValidation, "range with a > b");
  }
}

double ChernoffBound(double expected, double delta) {
  if (!(expected > 0.0) || !(delta > 0.0)) {
    throw Error(ErrorCode::kDomain,
                "Chernoff bound needs expected > 0 and delta > 0");
  }
  return std::min(1.0, 2.0 * std::exp(-delta * delta * expected / (2.0 + delta)));
}

double HoeffdingBound(std::span<const std::pair<double, double>> ranges,
                      double delta) {
  if (!(delta > 0.0)) {
    throw Error(ErrorCode::kDomain, "Hoeffding bound needs delta > 0");
  }
  double spread = 0.0;
  for (const auto& [a, b] : ranges) spread += (b - a) * (b - a);
  if (!(spread > 0.0)) {
    throw Error(ErrorCode::kDomain, "every polarity range is degenerate");
  }
  return std::min(1.0, 2.0 * std::exp(-2.0 * delta * delta / spread));
}

double CounterUniform(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = SplitMix64(SplitMix64(seed) ^ counter);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double MonteCarloTail(const BernoulliStream& stream,
                      std::span<const double> polarities, double delta,
                      TailMode mode, std::size_t trials, std::uint64_t seed) {
  stream.Validate();
  if (trials == 0) {
    throw Error(ErrorCode::kPrecondition, "Monte Carlo needs >= 1 trial");
  }
  const std::size_t horizon = stream.probabilities.size();
  if (polarities.size() != horizon) {
    throw Error(ErrorCode::kLengthMismatch,
                "one polarity per Bernoulli draw is required");
  }
  double expected = 0.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const double eta = polarities[t];
    if (mode == TailMode::kRelative && eta != 1.0) {
      throw Error(ErrorCode::kModeMismatch,
                  "relative deviations are defined for unit polarity only");
    }
    const auto [a, b] = stream.polarity_ranges[t];
    if (std::min(0.0, eta) < a || std::max(0.0, eta) > b) {
      throw Error(ErrorCode::kValidation,
                  "polarity-weighted draw escapes its range at t=" +
                      std::to_string(t));
    }
    expected += eta * stream.probabilities[t];
  }
  const double threshold =
      mode == TailMode::kRelative ? delta * expected : delta;

  std::size_t hits = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    double sum = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
      const double u = CounterUniform(seed, trial * horizon + t);
      if (u < stream.probabilities[t]) sum += polarities[t];
    }
    // A zero deviation is never a tail event, even when the threshold is 0.
    const double deviation = std::abs(sum - expected);
    if (deviation > 0.0 && deviation >= threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace fairrank
