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

#include <algorithm>
#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "fairrank/assign.h"
#include "fairrank/ranking.h"
#include "fairrank/rerank.h"
#include "fairrank/synth.h"

namespace fairrank {
namespace {

CostMatrix RandomMatrix(std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CostMatrix m(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) m(i, j) = unit(rng);
  }
  return m;
}

// DCG-style gain: relevance of the row times the discount of the column.
QualityConstraint RandomQuality(std::size_t k, double theta,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> relevance(k);
  for (double& r : relevance) r = unit(rng);
  std::sort(relevance.rbegin(), relevance.rend());
  QualityConstraint quality;
  quality.gain = CostMatrix(k);
  double ideal = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      quality.gain(i, j) = relevance[i] * PositionDiscount(j + 1);
    }
    ideal += quality.gain(i, i);
  }
  quality.target = theta * ideal;
  return quality;
}

void BM_Hungarian(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const CostMatrix costs = RandomMatrix(k, 1);
  for (auto _ : state) benchmark::DoNotOptimize(HungarianMinCost(costs));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_Bottleneck(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const CostMatrix d = RandomMatrix(k, 2);
  const QualityConstraint quality = RandomQuality(k, 0.8, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(BottleneckWithQuality(d, quality));
  }
}
BENCHMARK(BM_Bottleneck)->RangeMultiplier(2)->Range(8, 64);

void BM_ConstrainedMinSum(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const CostMatrix costs = RandomMatrix(k, 4);
  const QualityConstraint quality = RandomQuality(k, 0.8, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ConstrainedMinSum(costs, quality));
  }
}
BENCHMARK(BM_ConstrainedMinSum)->RangeMultiplier(2)->Range(8, 64);

// One full online pass over the default synthetic stream.
void BM_RerankOnline(benchmark::State& state) {
  const SynthData data = GenerateSynthBinary(SynthSpec{});
  RerankConfig config;
  config.objective = static_cast<RerankObjective>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(RerankOnline(data.dataset, data.stream, config));
  }
  state.SetLabel(std::string(RerankObjectiveName(config.objective)));
}
BENCHMARK(BM_RerankOnline)
    ->Arg(static_cast<int>(RerankObjective::kMinMax))
    ->Arg(static_cast<int>(RerankObjective::kMinSum))
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace fairrank

BENCHMARK_MAIN();
