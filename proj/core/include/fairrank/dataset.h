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

#ifndef FAIRRANK_DATASET_H_
#define FAIRRANK_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fairrank {

// Tolerance on the per-query relevance mass.
inline constexpr double kRelevanceSumTolerance = 1e-9;

// The set of individuals being ranked and their (exclusive) group labels.
//
// Individuals are stored sorted by identifier, so an individual's index is
// also its rank in identifier order. Groups are stored sorted by name and
// every group has at least one member.
class Dataset {
 public:
  Dataset() = default;

  // `group_labels[k]` is the group of `ids[k]`. Throws kValidation on
  // duplicate or empty identifiers and kLengthMismatch on size mismatch.
  Dataset(std::vector<std::string> ids,
          const std::vector<std::string>& group_labels);

  // Every individual in one group named "all".
  static Dataset SingleGroup(std::vector<std::string> ids);

  std::size_t size() const { return ids_.size(); }
  std::size_t num_groups() const { return group_names_.size(); }

  const std::string& id(std::size_t i) const { return ids_[i]; }
  const std::vector<std::string>& ids() const { return ids_; }
  std::size_t group_of(std::size_t i) const { return group_of_[i]; }
  const std::string& group_name(std::size_t g) const { return group_names_[g]; }
  const std::vector<std::size_t>& members(std::size_t g) const {
    return members_[g];
  }
  std::optional<std::size_t> index_of(std::string_view id) const;

  // Same individuals, new group assignment. `labels` is indexed like ids().
  Dataset WithGroups(const std::vector<std::string>& labels) const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> group_of_;
  std::vector<std::string> group_names_;
  std::vector<std::vector<std::size_t>> members_;
};

// One timestep of the query stream. `relevance` is indexed by dataset index
// and `polarity` holds one entry per query property (P >= 1).
struct QueryEvent {
  std::string query_id;
  std::int64_t t = 0;
  std::vector<double> polarity{1.0};
  std::vector<double> relevance;

  std::size_t components() const { return polarity.size(); }
};

// Scales non-negative scores to a probability vector.
// Throws kNegativeScore if any score is negative, kAllZero if all are zero.
std::vector<double> NormalizeRelevance(std::span<const double> raw_scores);

// Throws kValidation if `query` is not a well-formed event over `dataset`.
void ValidateQuery(const QueryEvent& query, const Dataset& dataset);

// Validates each query and that timesteps strictly increase (kStreamOrder).
void ValidateStream(std::span<const QueryEvent> stream, const Dataset& dataset);

}  // namespace fairrank

#endif  // FAIRRANK_DATASET_H_
