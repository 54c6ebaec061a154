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

#include "fairrank/attention.h"

#include <algorithm>
#include <cmath>

#include "fairrank/error.h"

namespace fairrank {

std::vector<double> AttentionWeights(std::size_t n, std::size_t cutoff) {
  if (n == 0 || cutoff == 0) {
    throw Error(ErrorCode::kPrecondition,
                "attention needs at least one position and a positive cutoff");
  }
  const std::size_t depth = std::min(n, cutoff);
  std::vector<double> weights(n, 0.0);
  double z = 0.0;
  for (std::size_t j = 1; j <= depth; ++j) {
    weights[j - 1] = 1.0 / std::log2(static_cast<double>(j) + 1.0);
    z += weights[j - 1];
  }
  for (std::size_t j = 0; j < depth; ++j) weights[j] /= z;
  return weights;
}

AttentionModel::AttentionModel(std::size_t n, std::size_t cutoff)
    : cutoff_(cutoff), weights_(AttentionWeights(n, cutoff)) {}

AttentionModel AttentionModel::FromWeights(std::vector<double> weights) {
  if (weights.empty()) {
    throw Error(ErrorCode::kPrecondition, "attention weights are empty");
  }
  double total = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] >= 0.0) || (j > 0 && weights[j] > weights[j - 1])) {
      throw Error(ErrorCode::kPrecondition,
                  "attention weights must be non-negative and non-increasing");
    }
    if (weights[j] > 0.0) last_positive = j + 1;
    total += weights[j];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::kPrecondition, "attention weights must sum to 1");
  }
  AttentionModel model;
  model.cutoff_ = last_positive;
  model.weights_ = std::move(weights);
  return model;
}

}  // namespace fairrank
