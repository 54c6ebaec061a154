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

#ifndef FAIRRANK_ATTENTION_H_
#define FAIRRANK_ATTENTION_H_

#include <cstddef>
#include <span>
#include <vector>

namespace fairrank {

// Position-bias attention: weight 1/log2(j+1) at positions j <= cutoff,
// exactly zero past the cutoff, normalized to sum to one.
std::vector<double> AttentionWeights(std::size_t n, std::size_t cutoff);

// Attention weights for a ranking of a fixed length.
class AttentionModel {
 public:
  static constexpr std::size_t kDefaultCutoff = 10;

  AttentionModel(std::size_t n, std::size_t cutoff = kDefaultCutoff);

  // Explicit weights, e.g. {1, 0}. Must be non-negative, non-increasing and
  // sum to one.
  static AttentionModel FromWeights(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  std::size_t cutoff() const { return cutoff_; }

  // 1-based position.
  double at_position(std::size_t position) const {
    return weights_[position - 1];
  }
  std::span<const double> weights() const { return weights_; }

 private:
  AttentionModel() = default;

  std::size_t cutoff_ = 0;
  std::vector<double> weights_;
};

}  // namespace fairrank

#endif  // FAIRRANK_ATTENTION_H_
