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

#include "fairrank/ranking.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairrank/error.h"

namespace fairrank {

Assignment::Assignment(std::vector<std::size_t> order, std::size_t reranked)
    : order_(std::move(order)), reranked_(reranked) {
  std::vector<bool> seen(order_.size(), false);
  for (std::size_t i : order_) {
    if (i >= order_.size() || seen[i]) {
      throw Error(ErrorCode::kValidation,
                  "assignment is not a bijection over positions");
    }
    seen[i] = true;
  }
  if (reranked_ > order_.size()) {
    throw Error(ErrorCode::kValidation, "re-ranked prefix exceeds ranking");
  }
}

std::vector<std::size_t> Assignment::positions() const {
  std::vector<std::size_t> pos(order_.size());
  for (std::size_t p = 0; p < order_.size(); ++p) pos[order_[p]] = p + 1;
  return pos;
}

std::vector<std::size_t> IdealRanking(const QueryEvent& query) {
  std::vector<std::size_t> order(query.relevance.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return query.relevance[a] > query.relevance[b];
                   });
  return order;
}

double PositionDiscount(std::size_t position) {
  return 1.0 / std::log2(static_cast<double>(position) + 1.0);
}

double DcgAtK(std::span<const std::size_t> ordering,
              std::span<const double> relevance, std::size_t k) {
  const std::size_t depth = std::min(k, ordering.size());
  double dcg = 0.0;
  for (std::size_t p = 0; p < depth; ++p) {
    dcg += relevance[ordering[p]] * PositionDiscount(p + 1);
  }
  return dcg;
}

double NdcgAtK(std::span<const std::size_t> ordering,
               std::span<const std::size_t> ideal_ordering,
               std::span<const double> relevance, std::size_t k) {
  const double ideal = DcgAtK(ideal_ordering, relevance, k);
  if (ideal == 0.0) return 1.0;
  return DcgAtK(ordering, relevance, k) / ideal;
}

}  // namespace fairrank
