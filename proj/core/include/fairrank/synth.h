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

#ifndef FAIRRANK_SYNTH_H_
#define FAIRRANK_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "fairrank/dataset.h"

namespace fairrank {

enum class SynthVariant { kBinary, kContinuous };

std::string_view SynthVariantName(SynthVariant variant);
std::optional<SynthVariant> ParseSynthVariant(std::string_view name);

// Two equal groups ("male", "female") ranked for T queries whose polarity
// alternates +1, -1, +1, ...
struct SynthSpec {
  std::size_t n = 200;  // even
  std::size_t T = 16;   // even
  std::uint64_t seed = 0;
  SynthVariant variant = SynthVariant::kBinary;
  // Test override: every query gets polarity +1.
  bool all_positive_polarity = false;
  // Continuous variant: raw scores ~ Normal(1, std) per group.
  double male_std = 0.2;
  double female_std = 0.1;
};

struct SynthData {
  Dataset dataset;
  std::vector<QueryEvent> stream;
};

// Raw relevance 1.01 for the favoured group and 0.99 for the other: males
// are favoured on positive queries, females on negative ones. Scores are
// normalized per query. Throws kSpec on odd n or T.
SynthData GenerateSynthBinary(const SynthSpec& spec);

// Raw relevance drawn per query from Normal(1, male_std) for males and
// Normal(1, female_std) for females, truncated below at 1e-6, normalized.
SynthData GenerateSynthContinuous(const SynthSpec& spec);

SynthData GenerateSynth(const SynthSpec& spec);

enum class PolarityLaw {
  kUnit,        // always +1
  kSigned,      // +1 or -1 with equal probability
  kContinuous,  // uniform on [-1, 1]
};

// Random property-test instance: every group non-empty, relevance per query
// drawn from a flat Dirichlet, polarities drawn from `law`.
// Throws kSpec unless n >= groups >= 1 and T >= 1.
SynthData GenerateRandomInstance(std::size_t n, std::size_t groups,
                                 std::size_t T, PolarityLaw law,
                                 std::uint64_t seed,
                                 std::size_t components = 1);

}  // namespace fairrank

#endif  // FAIRRANK_SYNTH_H_
