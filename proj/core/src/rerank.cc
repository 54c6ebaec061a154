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

#include "fairrank/rerank.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fairrank/bounds.h"
#include "fairrank/error.h"

namespace fairrank {
namespace {

// Sorted (descending) individual divergences, or the summed L1 gap for
// kMinSum. Smaller is better, compared lexicographically.
std::vector<double> ObjectiveKey(const Ledger& ledger,
                                 const RerankConfig& config) {
  if (config.objective == RerankObjective::kMinSum) {
    return {InequityOfAmortizedAttention(ledger, config.polarity_mode)};
  }
  std::vector<double> values(ledger.size());
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    values[i] =
        IndividualDivergence(ledger, i, config.kind, config.polarity_mode);
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

bool Improves(const std::vector<double>& candidate,
              const std::vector<double>& current) {
  for (std::size_t k = 0; k < candidate.size(); ++k) {
    if (std::abs(candidate[k] - current[k]) > 1e-12) {
      return candidate[k] < current[k];
    }
  }
  return false;
}

Ledger ReplayExcept(std::span<const QueryEvent> stream,
                    std::span<const Assignment> assignments,
                    const AttentionModel& attention, std::size_t skip) {
  Ledger ledger(attention.size(), stream.front().components());
  for (std::size_t t = 0; t < stream.size(); ++t) {
    if (t != skip) ledger.Update(stream[t], assignments[t], attention);
  }
  return ledger;
}

// Seeded restarts of the offline descent.
constexpr std::size_t kOfflineRestarts = 16;
// Rejection-sampling budget for a random quality-feasible start.
constexpr std::size_t kRestartAttempts = 32;

struct Descent {
  std::vector<Assignment> assignments;
  std::vector<double> key;
};

// Coordinate descent: re-solve each query against the end-of-stream state
// of all other queries; accept lexicographic improvements of the key.
Descent Descend(std::span<const QueryEvent> stream,
                const AttentionModel& attention, const RerankConfig& config,
                std::vector<Assignment> start, std::size_t max_sweeps) {
  Descent state{std::move(start), {}};
  state.key = ObjectiveKey(Replay(stream, state.assignments, attention), config);
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    bool improved = false;
    for (std::size_t t = 0; t < stream.size(); ++t) {
      // Divergences prospective against the rest of the stream are the
      // end-of-stream divergences as a function of this query's placement.
      const Ledger others = ReplayExcept(stream, state.assignments, attention, t);
      const StepProblem problem =
          BuildStepProblem(others, stream[t], attention, config);
      const MatchResult result = SolveStep(problem, config.objective);
      if (!result.feasible) continue;
      const Assignment candidate = StepAssignment(problem, result);
      if (candidate == state.assignments[t]) continue;
      std::vector<Assignment> trial = state.assignments;
      trial[t] = candidate;
      std::vector<double> key =
          ObjectiveKey(Replay(stream, trial, attention), config);
      if (Improves(key, state.key)) {
        state.assignments = std::move(trial);
        state.key = std::move(key);
        improved = true;
      }
    }
    if (!improved) break;
  }
  return state;
}

// Start `restart` of the offline descent: the system ranking for restart 0,
// random quality-feasible re-rankings of the candidates afterwards.
std::vector<Assignment> RestartAssignments(std::span<const QueryEvent> stream,
                                           const AttentionModel& attention,
                                           const RerankConfig& config,
                                           std::size_t restart) {
  std::vector<Assignment> start;
  const Ledger empty(attention.size(), stream.front().components());
  std::uint64_t counter = 0;
  const std::uint64_t key =
      config.seed ^ (0x9e3779b97f4a7c15ULL * (restart + 1));
  for (const QueryEvent& query : stream) {
    const StepProblem problem =
        BuildStepProblem(empty, query, attention, config);
    const std::size_t k = problem.candidates.size();
    MatchResult pick;
    pick.column_of.resize(k);
    std::iota(pick.column_of.begin(), pick.column_of.end(), 0);
    pick.feasible = true;
    if (restart > 0) {
      std::vector<std::size_t> shuffled = pick.column_of;
      for (std::size_t attempt = 0; attempt < kRestartAttempts; ++attempt) {
        for (std::size_t a = k; a > 1; --a) {
          const auto b = std::min(
              a - 1, static_cast<std::size_t>(CounterUniform(key, counter++) *
                                              static_cast<double>(a)));
          std::swap(shuffled[a - 1], shuffled[b]);
        }
        if (problem.quality.Satisfied(problem.quality.Value(shuffled))) {
          pick.column_of = shuffled;
          break;
        }
      }
    }
    start.push_back(StepAssignment(problem, pick));
  }
  return start;
}

// Worst prospective divergence among the candidates under `assignment`.
double StepObjective(const StepProblem& problem, const Assignment& assignment,
                     const RerankConfig& config) {
  const auto positions = assignment.positions();
  std::vector<std::size_t> column_of(problem.candidates.size());
  for (std::size_t a = 0; a < column_of.size(); ++a) {
    column_of[a] = positions[problem.candidates[a]] - 1;
  }
  const CostMatrix& matrix = config.objective == RerankObjective::kMinSum
                                 ? problem.l1_cost
                                 : problem.divergence;
  if (column_of.empty()) return 0.0;
  if (config.objective == RerankObjective::kMinSum) {
    double total = 0.0;
    for (std::size_t a = 0; a < column_of.size(); ++a) {
      total += matrix(a, column_of[a]);
    }
    return total;
  }
  return SortedEdgeValues(matrix, column_of).front();
}

}  // namespace

std::string_view RerankObjectiveName(RerankObjective objective) {
  switch (objective) {
    case RerankObjective::kNone: return "none";
    case RerankObjective::kMinMax: return "minmax";
    case RerankObjective::kMinMaxLex: return "minmax-lex";
    case RerankObjective::kMinSum: return "minsum";
  }
  return "?";
}

std::optional<RerankObjective> ParseRerankObjective(std::string_view name) {
  for (RerankObjective o :
       {RerankObjective::kNone, RerankObjective::kMinMax,
        RerankObjective::kMinMaxLex, RerankObjective::kMinSum}) {
    if (RerankObjectiveName(o) == name) return o;
  }
  if (name == "iaa") return RerankObjective::kMinSum;
  return std::nullopt;
}

std::string_view PolarityModeName(PolarityMode mode) {
  return mode == PolarityMode::kAware ? "aware" : "agnostic";
}

std::optional<PolarityMode> ParsePolarityMode(std::string_view name) {
  if (name == "aware") return PolarityMode::kAware;
  if (name == "agnostic") return PolarityMode::kAgnostic;
  return std::nullopt;
}

void RerankConfig::Validate(std::size_t n) const {
  auto fail = [](const std::string& message) {
    throw Error(ErrorCode::kConfig, message);
  };
  if (!(theta > 0.0 && theta <= 1.0)) fail("theta must lie in (0, 1]");
  if (attention_cutoff < 1) fail("attention cutoff must be >= 1");
  if (eval_depth < 1) fail("evaluation depth must be >= 1");
  if (attention_cutoff > prefilter_depth) {
    fail("attention cutoff " + std::to_string(attention_cutoff) +
         " exceeds prefilter depth " + std::to_string(prefilter_depth));
  }
  if (prefilter_depth > n) {
    fail("prefilter depth " + std::to_string(prefilter_depth) +
         " exceeds the " + std::to_string(n) + " individuals");
  }
}

std::size_t RunResult::fallback_count() const {
  return static_cast<std::size_t>(
      std::count(fallback.begin(), fallback.end(), 1));
}

StepProblem BuildStepProblem(const Ledger& ledger, const QueryEvent& query,
                             const AttentionModel& attention,
                             const RerankConfig& config) {
  StepProblem problem;
  problem.ideal = IdealRanking(query);
  problem.rho = DcgAtK(problem.ideal, query.relevance, config.eval_depth);
  const std::size_t k = std::min(config.prefilter_depth, problem.ideal.size());
  problem.candidates.assign(problem.ideal.begin(), problem.ideal.begin() + k);

  problem.divergence = CostMatrix(k);
  problem.l1_cost = CostMatrix(k);
  for (std::size_t a = 0; a < k; ++a) {
    const std::size_t i = problem.candidates[a];
    const ProspectiveEvaluator eval(ledger, i, query, config.kind,
                                    config.polarity_mode);
    const ProspectiveEvaluator l1(ledger, i, query, DivergenceKind::kL1,
                                  config.polarity_mode);
    for (std::size_t j = 0; j < k; ++j) {
      const double w = attention.at_position(j + 1);
      problem.divergence(a, j) = eval.Evaluate(w);
      problem.l1_cost(a, j) = config.kind == DivergenceKind::kL1
                                  ? problem.divergence(a, j)
                                  : l1.Evaluate(w);
    }
  }

  std::vector<double> relevance(k);
  for (std::size_t a = 0; a < k; ++a) {
    relevance[a] = query.relevance[problem.candidates[a]];
  }
  // Positions past the prefilter are frozen; their DCG share is constant.
  double tail = 0.0;
  for (std::size_t p = k; p < problem.ideal.size() && p < config.eval_depth;
       ++p) {
    tail += query.relevance[problem.ideal[p]] * PositionDiscount(p + 1);
  }
  problem.quality = QualityConstraint::Dcg(
      relevance, config.theta * problem.rho - tail, config.eval_depth);
  // Tolerance relative to rho keeps nDCG >= theta - 1e-9.
  problem.quality.tolerance =
      kFeasibilityTolerance * std::min(1.0, problem.rho);
  return problem;
}

MatchResult SolveStep(const StepProblem& problem, RerankObjective objective) {
  const std::size_t k = problem.candidates.size();
  switch (objective) {
    case RerankObjective::kNone: {
      MatchResult r;
      r.column_of.resize(k);
      for (std::size_t a = 0; a < k; ++a) r.column_of[a] = a;
      r.feasible = true;
      r.quality = problem.quality.Value(r.column_of);
      r.objective = k == 0 ? 0.0 : SortedEdgeValues(problem.divergence,
                                                    r.column_of).front();
      return r;
    }
    case RerankObjective::kMinMax:
      return BottleneckWithQuality(problem.divergence, problem.quality);
    case RerankObjective::kMinMaxLex: {
      MatchResult base =
          BottleneckWithQuality(problem.divergence, problem.quality);
      return LexicographicRefine(problem.divergence, problem.quality, base);
    }
    case RerankObjective::kMinSum:
      return ConstrainedMinSum(problem.l1_cost, problem.quality);
  }
  return {};
}

Assignment StepAssignment(const StepProblem& problem,
                          const MatchResult& result) {
  const std::size_t k = problem.candidates.size();
  std::vector<std::size_t> order = problem.ideal;
  if (result.feasible) {
    for (std::size_t a = 0; a < k; ++a) {
      order[result.column_of[a]] = problem.candidates[a];
    }
  }
  return Assignment(std::move(order), k);
}

RunResult RerankOnline(const Dataset& dataset,
                       std::span<const QueryEvent> stream,
                       const RerankConfig& config) {
  config.Validate(dataset.size());
  ValidateStream(stream, dataset);
  RunResult run;
  run.config = config;
  const AttentionModel attention(dataset.size(), config.attention_cutoff);
  run.ledger =
      Ledger(dataset.size(), stream.empty() ? 1 : stream.front().components());
  for (const QueryEvent& query : stream) {
    const StepProblem problem =
        BuildStepProblem(run.ledger, query, attention, config);
    MatchResult result = SolveStep(problem, config.objective);
    const bool fallback = !result.feasible;
    const Assignment assignment = StepAssignment(problem, result);
    run.ndcg.push_back(NdcgAtK(assignment.order(), problem.ideal,
                               query.relevance, config.eval_depth));
    run.fallback.push_back(fallback ? 1 : 0);
    run.trace.push_back(fallback ? std::nan("") : result.objective);
    run.ledger.Update(query, assignment, attention);
    run.assignments.push_back(assignment);
  }
  return run;
}

RunResult RerankOffline(const Dataset& dataset,
                        std::span<const QueryEvent> stream,
                        const RerankConfig& config, std::size_t max_sweeps) {
  RunResult run = RerankOnline(dataset, stream, config);
  if (config.objective == RerankObjective::kNone || max_sweeps == 0 ||
      stream.size() <= 1) {
    return run;
  }
  const AttentionModel attention(dataset.size(), config.attention_cutoff);

  // Descent from the online solution, then from seeded restarts; the
  // lexicographically best local optimum wins, so the result is never worse
  // than the online run.
  Descent best = Descend(stream, attention, config, run.assignments,
                         max_sweeps);
  for (std::size_t r = 0; r < kOfflineRestarts; ++r) {
    Descent trial = Descend(stream, attention, config,
                            RestartAssignments(stream, attention, config, r),
                            max_sweeps);
    if (Improves(trial.key, best.key)) best = std::move(trial);
  }

  run.ledger = Replay(stream, best.assignments, attention);
  for (std::size_t t = 0; t < stream.size(); ++t) {
    const StepProblem problem = BuildStepProblem(
        ReplayExcept(stream, best.assignments, attention, t), stream[t],
        attention, config);
    const auto ideal = IdealRanking(stream[t]);
    run.ndcg[t] = NdcgAtK(best.assignments[t].order(), ideal,
                          stream[t].relevance, config.eval_depth);
    run.fallback[t] =
        run.fallback[t] && best.assignments[t] == run.assignments[t] ? 1 : 0;
    if (!run.fallback[t]) {
      run.trace[t] = StepObjective(problem, best.assignments[t], config);
    }
  }
  run.assignments = std::move(best.assignments);
  return run;
}

Ledger Replay(std::span<const QueryEvent> stream,
              std::span<const Assignment> assignments,
              const AttentionModel& attention) {
  if (assignments.size() != stream.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "replay needs one assignment per query");
  }
  Ledger ledger(attention.size(),
                stream.empty() ? 1 : stream.front().components());
  for (std::size_t t = 0; t < stream.size(); ++t) {
    ledger.Update(stream[t], assignments[t], attention);
  }
  return ledger;
}

double FinalHorizonObjective(const Ledger& ledger, const RerankConfig& config) {
  if (config.objective == RerankObjective::kMinSum) {
    return InequityOfAmortizedAttention(ledger, config.polarity_mode);
  }
  return IndividualUnfairness(ledger, config.kind, config.polarity_mode);
}

MetricsReport EvaluateRun(const RunResult& result, const Dataset& dataset,
                          const RunResult* baseline) {
  MetricsReport report;
  report.aware = ComputeModeMetrics(result.ledger, dataset, PolarityMode::kAware);
  report.agnostic =
      ComputeModeMetrics(result.ledger, dataset, PolarityMode::kAgnostic);
  report.queries = result.ndcg.size();
  report.fallback_count = result.fallback_count();
  if (!result.ndcg.empty()) {
    double total = 0.0;
    report.min_ndcg = result.ndcg.front();
    for (double v : result.ndcg) {
      total += v;
      report.min_ndcg = std::min(report.min_ndcg, v);
    }
    report.mean_ndcg = total / static_cast<double>(result.ndcg.size());
  }

  const auto aware = Flatten(report.aware);
  const auto agnostic = Flatten(report.agnostic);
  for (std::size_t m = 0; m < aware.size(); ++m) {
    std::optional<double> delta;
    if (aware[m].value && agnostic[m].value) {
      delta = FairwashingDelta(*aware[m].value, *agnostic[m].value);
    }
    report.fairwashing.push_back({aware[m].name, delta});
  }

  if (baseline != nullptr) {
    for (PolarityMode mode : {PolarityMode::kAware, PolarityMode::kAgnostic}) {
      const auto pre =
          Flatten(ComputeModeMetrics(baseline->ledger, dataset, mode));
      const auto post = Flatten(mode == PolarityMode::kAware ? report.aware
                                                             : report.agnostic);
      for (std::size_t m = 0; m < pre.size(); ++m) {
        std::optional<double> change;
        if (pre[m].value && post[m].value) {
          change = RelativeImprovement(*pre[m].value, *post[m].value);
        }
        report.relative_improvement.push_back(
            {std::string(PolarityModeName(mode)) + "/" + pre[m].name, change});
      }
    }
  }
  return report;
}

}  // namespace fairrank
