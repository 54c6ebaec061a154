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

#ifndef FAIRRANK_RERANK_H_
#define FAIRRANK_RERANK_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fairrank/assign.h"
#include "fairrank/attention.h"
#include "fairrank/dataset.h"
#include "fairrank/divergence.h"
#include "fairrank/ledger.h"
#include "fairrank/metrics.h"
#include "fairrank/ranking.h"

namespace fairrank {

enum class RerankObjective {
  kNone,       // pass the system ranking through
  kMinMax,     // minimize the worst prospective divergence
  kMinMaxLex,  // kMinMax, then lexicographic refinement
  kMinSum,     // minimize the summed prospective L1 gap (IAA)
};

std::string_view RerankObjectiveName(RerankObjective objective);
std::optional<RerankObjective> ParseRerankObjective(std::string_view name);
std::string_view PolarityModeName(PolarityMode mode);
std::optional<PolarityMode> ParsePolarityMode(std::string_view name);

struct RerankConfig {
  DivergenceKind kind = DivergenceKind::kL1;
  RerankObjective objective = RerankObjective::kMinMax;
  double theta = 0.8;                 // retained fraction of ideal DCG
  std::size_t prefilter_depth = 50;   // candidates re-ranked per query
  std::size_t attention_cutoff = 10;  // last position receiving attention
  std::size_t eval_depth = 10;        // DCG / nDCG depth
  PolarityMode polarity_mode = PolarityMode::kAware;
  std::uint64_t seed = 0;

  // Throws kConfig unless 0 < theta <= 1 and
  // 1 <= attention_cutoff <= prefilter_depth <= n.
  void Validate(std::size_t n) const;
};

struct RunResult {
  RerankConfig config;
  std::vector<Assignment> assignments;
  std::vector<double> ndcg;
  std::vector<char> fallback;
  std::vector<double> trace;  // solver objective per query
  Ledger ledger;

  std::size_t fallback_count() const;
};

// One query's re-ranking subproblem over the prefiltered candidates.
struct StepProblem {
  std::vector<std::size_t> ideal;       // full system ranking
  std::vector<std::size_t> candidates;  // ideal prefix of prefilter_depth
  CostMatrix divergence;                // candidate x position
  CostMatrix l1_cost;                   // prospective L1, for kMinSum
  QualityConstraint quality;            // DCG@eval_depth >= theta * rho
  double rho = 0.0;                     // DCG@eval_depth of the ideal
};

StepProblem BuildStepProblem(const Ledger& ledger, const QueryEvent& query,
                             const AttentionModel& attention,
                             const RerankConfig& config);

MatchResult SolveStep(const StepProblem& problem, RerankObjective objective);

// Full ranking realizing `result` on the problem's candidates; the ideal
// ranking for kNone or an infeasible result.
Assignment StepAssignment(const StepProblem& problem,
                          const MatchResult& result);

// Online re-ranking: each query is solved against the ledger of the queries
// before it. Infeasible steps fall back to the system ranking and are
// flagged. Throws kStreamOrder on non-increasing timesteps.
RunResult RerankOnline(const Dataset& dataset,
                       std::span<const QueryEvent> stream,
                       const RerankConfig& config);

// Starts from RerankOnline and revisits queries in order, re-solving each
// one against the end-of-stream objective with the other assignments held
// fixed, until a sweep makes no progress or `max_sweeps` is reached.
RunResult RerankOffline(const Dataset& dataset,
                        std::span<const QueryEvent> stream,
                        const RerankConfig& config, std::size_t max_sweeps);

// Rebuilds the ledger of a stream ranked by the given assignments.
Ledger Replay(std::span<const QueryEvent> stream,
              std::span<const Assignment> assignments,
              const AttentionModel& attention);

// End-of-stream objective of a run: worst individual divergence for the
// min-max objectives, summed L1 gap for kMinSum.
double FinalHorizonObjective(const Ledger& ledger, const RerankConfig& config);

// Metrics in both polarity modes, fairwashing deltas, and relative
// improvements against `baseline` when given.
MetricsReport EvaluateRun(const RunResult& result, const Dataset& dataset,
                          const RunResult* baseline = nullptr);

}  // namespace fairrank

#endif  // FAIRRANK_RERANK_H_
