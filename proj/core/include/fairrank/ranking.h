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

#ifndef FAIRRANK_RANKING_H_
#define FAIRRANK_RANKING_H_

#include <cstddef>
#include <span>
#include <vector>

#include "fairrank/dataset.h"

namespace fairrank {

// A full ranking of one query's individuals. order()[p] is the individual at
// 1-based position p+1. The first `reranked` positions are the ones the
// re-ranker was allowed to permute; the rest is the untouched tail.
class Assignment {
 public:
  Assignment() = default;

  // Throws kValidation unless `order` is a permutation of 0..n-1.
  explicit Assignment(std::vector<std::size_t> order,
                      std::size_t reranked = 0);

  std::size_t size() const { return order_.size(); }
  std::size_t reranked() const { return reranked_; }
  std::span<const std::size_t> order() const { return order_; }
  std::size_t at(std::size_t position) const { return order_[position - 1]; }

  // positions()[i] is the 1-based position of individual i.
  std::vector<std::size_t> positions() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::size_t> order_;
  std::size_t reranked_ = 0;
};

// Individuals by descending relevance; ties by ascending identifier (which
// is ascending dataset index).
std::vector<std::size_t> IdealRanking(const QueryEvent& query);

// Sum over the first min(k, |ordering|) positions of rel / log2(j+1).
double DcgAtK(std::span<const std::size_t> ordering,
              std::span<const double> relevance, std::size_t k);

// DcgAtK(ordering) / DcgAtK(ideal_ordering); 1 when the ideal DCG is zero.
double NdcgAtK(std::span<const std::size_t> ordering,
               std::span<const std::size_t> ideal_ordering,
               std::span<const double> relevance, std::size_t k);

// 1 / log2(position + 1) for a 1-based position.
double PositionDiscount(std::size_t position);

}  // namespace fairrank

#endif  // FAIRRANK_RANKING_H_
