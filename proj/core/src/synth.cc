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

#include "fairrank/synth.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>

#include "fairrank/error.h"

namespace fairrank {
namespace {

std::string PaddedId(char prefix, std::size_t index, std::size_t count) {
  const int width =
      std::max<int>(3, static_cast<int>(std::to_string(count - 1).size()));
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%c%0*zu", prefix, width, index);
  return buffer;
}

std::string QueryId(std::size_t t, std::size_t horizon) {
  return PaddedId('q', t, horizon + 1);
}

struct TwoGroups {
  Dataset dataset;
  std::vector<char> is_male;  // by dataset index
};

TwoGroups MakeTwoGroups(const SynthSpec& spec) {
  if (spec.n == 0 || spec.n % 2 != 0) {
    throw Error(ErrorCode::kSpec, "synthetic n must be positive and even");
  }
  if (spec.T == 0 || spec.T % 2 != 0) {
    throw Error(ErrorCode::kSpec, "synthetic T must be positive and even");
  }
  const std::size_t half = spec.n / 2;
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < half; ++k) {
    ids.push_back(PaddedId('m', k, half));
    labels.push_back("male");
  }
  for (std::size_t k = 0; k < half; ++k) {
    ids.push_back(PaddedId('f', k, half));
    labels.push_back("female");
  }
  TwoGroups out{Dataset(ids, labels), {}};
  for (std::size_t i = 0; i < out.dataset.size(); ++i) {
    out.is_male.push_back(out.dataset.group_name(out.dataset.group_of(i)) ==
                          "male");
  }
  return out;
}

double AlternatingPolarity(const SynthSpec& spec, std::size_t t) {
  if (spec.all_positive_polarity) return 1.0;
  return t % 2 == 0 ? 1.0 : -1.0;
}

}  // namespace

std::string_view SynthVariantName(SynthVariant variant) {
  return variant == SynthVariant::kBinary ? "binary" : "continuous";
}

std::optional<SynthVariant> ParseSynthVariant(std::string_view name) {
  if (name == "binary" || name == "synth-binary") return SynthVariant::kBinary;
  if (name == "continuous" || name == "cont" || name == "synth-cont") {
    return SynthVariant::kContinuous;
  }
  return std::nullopt;
}

SynthData GenerateSynthBinary(const SynthSpec& spec) {
  TwoGroups groups = MakeTwoGroups(spec);
  SynthData data{groups.dataset, {}};
  for (std::size_t t = 0; t < spec.T; ++t) {
    QueryEvent q;
    q.query_id = QueryId(t + 1, spec.T);
    q.t = static_cast<std::int64_t>(t + 1);
    const double eta = AlternatingPolarity(spec, t);
    q.polarity = {eta};
    std::vector<double> raw(data.dataset.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const bool favoured = (eta > 0.0) == static_cast<bool>(groups.is_male[i]);
      raw[i] = favoured ? 1.01 : 0.99;
    }
    q.relevance = NormalizeRelevance(raw);
    data.stream.push_back(std::move(q));
  }
  return data;
}

SynthData GenerateSynthContinuous(const SynthSpec& spec) {
  if (spec.male_std < 0.0 || spec.female_std < 0.0) {
    throw Error(ErrorCode::kSpec, "standard deviations must be >= 0");
  }
  TwoGroups groups = MakeTwoGroups(spec);
  SynthData data{groups.dataset, {}};
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t t = 0; t < spec.T; ++t) {
    QueryEvent q;
    q.query_id = QueryId(t + 1, spec.T);
    q.t = static_cast<std::int64_t>(t + 1);
    q.polarity = {AlternatingPolarity(spec, t)};
    std::vector<double> raw(data.dataset.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const double sd = groups.is_male[i] ? spec.male_std : spec.female_std;
      raw[i] = std::max(1e-6, 1.0 + sd * normal(rng));
    }
    q.relevance = NormalizeRelevance(raw);
    data.stream.push_back(std::move(q));
  }
  return data;
}

SynthData GenerateSynth(const SynthSpec& spec) {
  return spec.variant == SynthVariant::kBinary ? GenerateSynthBinary(spec)
                                               : GenerateSynthContinuous(spec);
}

SynthData GenerateRandomInstance(std::size_t n, std::size_t groups,
                                 std::size_t T, PolarityLaw law,
                                 std::uint64_t seed, std::size_t components) {
  if (groups < 1 || n < groups || T < 1 || components < 1) {
    throw Error(ErrorCode::kSpec,
                "random instance needs n >= groups >= 1, T >= 1, P >= 1");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> slots(n);
  std::iota(slots.begin(), slots.end(), 0);
  std::shuffle(slots.begin(), slots.end(), rng);
  std::vector<std::string> ids(n), labels(n);
  std::uniform_int_distribution<std::size_t> pick_group(0, groups - 1);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = slots[k];
    ids[i] = PaddedId('i', i, n);
    const std::size_t g = k < groups ? k : pick_group(rng);
    labels[i] = PaddedId('g', g, groups);
  }
  SynthData data{Dataset(ids, labels), {}};

  std::exponential_distribution<double> exponential(1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t t = 0; t < T; ++t) {
    QueryEvent q;
    q.query_id = QueryId(t + 1, T);
    q.t = static_cast<std::int64_t>(t + 1);
    q.polarity.assign(components, 1.0);
    for (double& eta : q.polarity) {
      switch (law) {
        case PolarityLaw::kUnit: eta = 1.0; break;
        case PolarityLaw::kSigned: eta = coin(rng) ? 1.0 : -1.0; break;
        case PolarityLaw::kContinuous: eta = unit(rng); break;
      }
    }
    std::vector<double> raw(n);
    for (double& r : raw) r = exponential(rng) + 1e-12;
    q.relevance = NormalizeRelevance(raw);
    data.stream.push_back(std::move(q));
  }
  return data;
}

}  // namespace fairrank
