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

#include "fairrank/dataset.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "fairrank/error.h"

namespace fairrank {

Dataset::Dataset(std::vector<std::string> ids,
                 const std::vector<std::string>& group_labels) {
  if (ids.size() != group_labels.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "dataset has " + std::to_string(ids.size()) +
                    " individuals but " + std::to_string(group_labels.size()) +
                    " group labels");
  }
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });

  std::map<std::string, std::size_t> group_index;
  for (const auto& label : group_labels) group_index.emplace(label, 0);
  for (auto& [name, index] : group_index) {
    index = group_names_.size();
    group_names_.push_back(name);
  }
  members_.resize(group_names_.size());

  ids_.reserve(ids.size());
  for (std::size_t k : order) {
    if (ids[k].empty()) {
      throw Error(ErrorCode::kValidation, "empty individual identifier");
    }
    const std::size_t i = ids_.size();
    if (!index_.emplace(ids[k], i).second) {
      throw Error(ErrorCode::kValidation,
                  "duplicate individual identifier '" + ids[k] + "'");
    }
    ids_.push_back(std::move(ids[k]));
    const std::size_t g = group_index.at(group_labels[k]);
    group_of_.push_back(g);
    members_[g].push_back(i);
  }
}

Dataset Dataset::SingleGroup(std::vector<std::string> ids) {
  std::vector<std::string> labels(ids.size(), "all");
  return Dataset(std::move(ids), labels);
}

std::optional<std::size_t> Dataset::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Dataset Dataset::WithGroups(const std::vector<std::string>& labels) const {
  return Dataset(ids_, labels);
}

std::vector<double> NormalizeRelevance(std::span<const double> raw_scores) {
  double total = 0.0;
  for (double s : raw_scores) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::kNegativeScore,
                  "relevance scores must be finite and non-negative");
    }
    total += s;
  }
  if (total == 0.0) {
    throw Error(ErrorCode::kAllZero, "every relevance score is zero");
  }
  std::vector<double> out(raw_scores.begin(), raw_scores.end());
  for (double& s : out) s /= total;
  return out;
}

void ValidateQuery(const QueryEvent& query, const Dataset& dataset) {
  const std::string where = "query '" + query.query_id + "' (t=" +
                            std::to_string(query.t) + "): ";
  if (query.t < 1) {
    throw Error(ErrorCode::kValidation, where + "timesteps are 1-based");
  }
  if (query.polarity.empty()) {
    throw Error(ErrorCode::kValidation, where + "polarity vector is empty");
  }
  for (double eta : query.polarity) {
    if (!std::isfinite(eta)) {
      throw Error(ErrorCode::kValidation, where + "non-finite polarity");
    }
  }
  if (query.relevance.size() != dataset.size()) {
    throw Error(ErrorCode::kValidation,
                where + "relevance covers " +
                    std::to_string(query.relevance.size()) + " of " +
                    std::to_string(dataset.size()) + " individuals");
  }
  double total = 0.0;
  for (double r : query.relevance) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw Error(ErrorCode::kValidation,
                  where + "relevance must be finite and non-negative");
    }
    total += r;
  }
  if (std::abs(total - 1.0) > kRelevanceSumTolerance) {
    throw Error(ErrorCode::kValidation,
                where + "relevance sums to " + std::to_string(total));
  }
}

void ValidateStream(std::span<const QueryEvent> stream,
                    const Dataset& dataset) {
  for (std::size_t k = 0; k < stream.size(); ++k) {
    ValidateQuery(stream[k], dataset);
    if (k > 0 && stream[k].t <= stream[k - 1].t) {
      throw Error(ErrorCode::kStreamOrder,
                  "timestep " + std::to_string(stream[k].t) +
                      " does not follow " + std::to_string(stream[k - 1].t));
    }
    if (stream[k].components() != stream[0].components()) {
      throw Error(ErrorCode::kLengthMismatch,
                  "polarity length changes within the stream");
    }
  }
}

}  // namespace fairrank
