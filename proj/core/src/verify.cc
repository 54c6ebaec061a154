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

#include "fairrank/verify.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <utility>

#include "fairrank/assign.h"
#include "fairrank/attention.h"
#include "fairrank/bounds.h"
#include "fairrank/dataset.h"
#include "fairrank/divergence.h"
#include "fairrank/error.h"
#include "fairrank/ledger.h"
#include "fairrank/metrics.h"
#include "fairrank/ranking.h"
#include "fairrank/rerank.h"
#include "fairrank/synth.h"

namespace fairrank {
namespace {

constexpr double kAgreementTolerance = 1e-9;
constexpr std::size_t kMaxDiagnostics = 5;

using Rng = std::mt19937_64;

std::size_t UniformIndex(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double Uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

CheckResult NamedCheck(std::string name) {
  CheckResult check;
  check.name = std::move(name);
  return check;
}

void Record(CheckResult& check, bool ok, double excess,
            const std::function<std::string()>& describe) {
  ++check.cases;
  if (ok) return;
  ++check.failures;
  check.max_error = std::max(check.max_error, excess);
  if (check.diagnostics.size() < kMaxDiagnostics) {
    check.diagnostics.push_back(describe());
  }
}

// Wall-clock timer filling SuiteReport::seconds on destruction.
class SuiteTimer {
 public:
  explicit SuiteTimer(SuiteReport& report)
      : report_(report), start_(std::chrono::steady_clock::now()) {}
  ~SuiteTimer() {
    report_.seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start_)
                          .count();
  }

 private:
  SuiteReport& report_;
  std::chrono::steady_clock::time_point start_;
};

Assignment RandomAssignment(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  return Assignment(std::move(order));
}

// A random ledger history of `history` queries plus one more query to be
// ranked next.
struct StepState {
  SynthData data;
  Ledger ledger;
  QueryEvent next;
};

StepState RandomStepState(std::size_t n, std::size_t groups,
                          std::size_t history, std::size_t cutoff, Rng& rng) {
  StepState state;
  state.data = GenerateRandomInstance(n, groups, history + 1,
                                      PolarityLaw::kSigned, rng());
  const AttentionModel attention(n, cutoff);
  state.ledger = Ledger(n, 1);
  for (std::size_t t = 0; t < history; ++t) {
    state.ledger.Update(state.data.stream[t], RandomAssignment(n, rng),
                        attention);
  }
  state.next = state.data.stream[history];
  return state;
}

// DCG of the best ordering of `relevance` on positions 1..min(K, depth).
double IdealGain(std::vector<double> relevance, std::size_t depth) {
  std::sort(relevance.begin(), relevance.end(), std::greater<>());
  double total = 0.0;
  for (std::size_t j = 0; j < relevance.size() && j < depth; ++j) {
    total += relevance[j] / std::log2(static_cast<double>(j) + 2.0);
  }
  return total;
}

struct SolverInstance {
  CostMatrix divergence;
  CostMatrix sum_cost;
  QualityConstraint quality;
  std::string origin;
};

// Even instances come from real re-ranking steps; odd ones are coarse
// random matrices with many ties and some forbidden edges.
SolverInstance RandomSolverInstance(std::size_t index, Rng& rng) {
  const std::size_t k = UniformIndex(rng, 2, 7);
  SolverInstance instance;
  std::vector<double> relevance(k);
  std::size_t depth = k;
  if (index % 2 == 0) {
    const std::size_t n = k + UniformIndex(rng, 0, 4);
    const std::size_t cutoff = UniformIndex(rng, 1, k);
    StepState state =
        RandomStepState(n, UniformIndex(rng, 1, std::min<std::size_t>(3, n)),
                        UniformIndex(rng, 0, 5), cutoff, rng);
    RerankConfig config;
    config.kind = kAllDivergenceKinds[index / 2 % 3];
    config.prefilter_depth = k;
    config.attention_cutoff = cutoff;
    config.eval_depth = UniformIndex(rng, 1, k);
    config.polarity_mode =
        index % 4 == 0 ? PolarityMode::kAware : PolarityMode::kAgnostic;
    const AttentionModel attention(n, cutoff);
    StepProblem problem =
        BuildStepProblem(state.ledger, state.next, attention, config);
    instance.divergence = problem.divergence;
    instance.sum_cost = problem.l1_cost;
    for (std::size_t i = 0; i < k; ++i) {
      relevance[i] = state.next.relevance[problem.candidates[i]];
    }
    depth = config.eval_depth;
    instance.origin = "step(" + std::string(DivergenceKindName(config.kind)) +
                      ", n=" + std::to_string(n) + ")";
  } else {
    instance.divergence = CostMatrix(k);
    instance.sum_cost = CostMatrix(k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        instance.divergence(i, j) = std::round(Uniform(rng) * 10.0) / 10.0;
        instance.sum_cost(i, j) = std::round(Uniform(rng) * 10.0) / 10.0;
        if (Uniform(rng) < 0.1) {
          instance.divergence(i, j) = kForbidden;
          instance.sum_cost(i, j) = kForbidden;
        }
      }
      relevance[i] = std::round(Uniform(rng) * 4.0) / 4.0;
    }
    instance.origin = "random";
  }
  const double ideal = IdealGain(relevance, depth);
  instance.quality = QualityConstraint::Dcg(relevance, Uniform(rng) * ideal,
                                            depth);
  instance.origin += ", K=" + std::to_string(k);
  return instance;
}

bool SameObjective(const MatchResult& a, const MatchResult& b) {
  if (a.feasible != b.feasible) return false;
  if (!a.feasible) return true;
  if (std::isinf(a.objective) || std::isinf(b.objective)) {
    return a.objective == b.objective;
  }
  return std::abs(a.objective - b.objective) <= kAgreementTolerance;
}

std::string Describe(const std::string& origin, const MatchResult& got,
                     const MatchResult& want) {
  std::ostringstream out;
  out.precision(12);
  out << origin << ": solver " << (got.feasible ? "" : "infeasible ")
      << got.objective << " vs oracle " << (want.feasible ? "" : "infeasible ")
      << want.objective;
  return out.str();
}

double Excess(const MatchResult& got, const MatchResult& want) {
  if (got.feasible != want.feasible) return std::numeric_limits<double>::infinity();
  return std::abs(got.objective - want.objective);
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed(); });
}

SuiteReport VerifySolvers(const VerifyOptions& options) {
  SuiteReport report{"solver", {}, 0.0};
  SuiteTimer timer(report);
  const std::size_t instances = options.instances ? options.instances : 200;
  CheckResult bottleneck = NamedCheck("bottleneck_vs_oracle");
  CheckResult min_sum = NamedCheck("minsum_vs_oracle");
  CheckResult lex_bottleneck = NamedCheck("lex_keeps_bottleneck");
  CheckResult lex_oracle = NamedCheck("lex_vs_oracle");
  lex_oracle.informational = true;
  Rng rng(options.seed ^ 0x736f6c766572ULL);
  for (std::size_t s = 0; s < instances; ++s) {
    const SolverInstance inst = RandomSolverInstance(s, rng);

    const MatchResult got = BottleneckWithQuality(inst.divergence, inst.quality);
    const MatchResult want =
        BruteForce(MatchObjective::kMinMax, inst.divergence, inst.quality);
    Record(bottleneck, SameObjective(got, want), Excess(got, want),
           [&] { return Describe(inst.origin, got, want); });

    const MatchResult sum = ConstrainedMinSum(inst.sum_cost, inst.quality);
    const MatchResult sum_want =
        BruteForce(MatchObjective::kMinSum, inst.sum_cost, inst.quality);
    Record(min_sum, SameObjective(sum, sum_want), Excess(sum, sum_want),
           [&] { return Describe(inst.origin, sum, sum_want); });

    if (!got.feasible) continue;
    const MatchResult lex = LexicographicRefine(inst.divergence, inst.quality, got);
    const bool keeps = lex.feasible &&
                       inst.quality.Satisfied(inst.quality.Value(lex.column_of)) &&
                       SameObjective(lex, want);
    Record(lex_bottleneck, keeps, Excess(lex, want),
           [&] { return Describe(inst.origin, lex, want); });
    const MatchResult lex_want =
        BruteForce(MatchObjective::kLexMax, inst.divergence, inst.quality);
    const auto a = SortedEdgeValues(inst.divergence, lex.column_of);
    const auto b = SortedEdgeValues(inst.divergence, lex_want.column_of);
    bool equal = true;
    double gap = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      gap = std::max(gap, std::abs(a[i] - b[i]));
      if (std::abs(a[i] - b[i]) > kAgreementTolerance) equal = false;
    }
    Record(lex_oracle, equal, gap, [&] {
      return inst.origin + ": greedy lexicographic vector differs from oracle";
    });
  }
  report.checks = {bottleneck, min_sum, lex_bottleneck, lex_oracle};
  return report;
}

SuiteReport VerifyGroupBound(const VerifyOptions& options) {
  SuiteReport report{"theorem2", {}, 0.0};
  SuiteTimer timer(report);
  const std::size_t instances = options.instances ? options.instances : 500;
  std::vector<CheckResult> checks;
  for (DivergenceKind kind : kAllDivergenceKinds) {
    checks.push_back(NamedCheck("group_le_individual_" +
                                std::string(DivergenceKindName(kind))));
  }
  Rng rng(options.seed ^ 0x67726f7570ULL);
  for (std::size_t s = 0; s < instances; ++s) {
    const std::size_t n = UniformIndex(rng, 1, 20);
    const std::size_t groups = UniformIndex(rng, 1, std::min<std::size_t>(5, n));
    const std::size_t T = UniformIndex(rng, 1, 10);
    const std::size_t cutoff = UniformIndex(rng, 1, n);
    const SynthData data =
        GenerateRandomInstance(n, groups, T, PolarityLaw::kSigned, rng());
    const AttentionModel attention(n, cutoff);
    Ledger ledger(n, 1);
    for (const QueryEvent& q : data.stream) {
      // Mix system rankings with arbitrary ones.
      if (Uniform(rng) < 0.3) {
        ledger.Update(q, Assignment(IdealRanking(q)), attention);
      } else {
        ledger.Update(q, RandomAssignment(n, rng), attention);
      }
    }
    for (std::size_t k = 0; k < 3; ++k) {
      for (PolarityMode mode : {PolarityMode::kAware, PolarityMode::kAgnostic}) {
        const double individual =
            IndividualUnfairness(ledger, kAllDivergenceKinds[k], mode);
        const double group =
            GroupUnfairness(ledger, data.dataset, kAllDivergenceKinds[k], mode);
        Record(checks[k], group <= individual + kAgreementTolerance,
               group - individual, [&] {
                 std::ostringstream out;
                 out.precision(12);
                 out << "instance " << s << " (n=" << n << ", G=" << groups
                     << ", T=" << T << ", " << PolarityModeName(mode)
                     << "): group " << group << " > individual " << individual;
                 return out.str();
               });
      }
    }
  }
  report.checks = std::move(checks);
  return report;
}

SuiteReport VerifyBounds(const VerifyOptions& options) {
  SuiteReport report{"bounds", {}, 0.0};
  SuiteTimer timer(report);
  CheckResult chernoff = NamedCheck("chernoff_dominates");
  CheckResult hoeffding = NamedCheck("hoeffding_dominates");
  const std::size_t trials = options.trials;
  std::uint64_t cell = 0;
  for (std::size_t T : {5, 20, 50}) {
    for (double p : {0.1, 0.5}) {
      BernoulliStream stream;
      stream.probabilities.assign(T, p);
      std::vector<double> unit(T, 1.0);
      std::vector<double> signed_eta(T);
      std::vector<std::pair<double, double>> unit_ranges(T, {0.0, 1.0});
      std::vector<std::pair<double, double>> signed_ranges(T);
      for (std::size_t t = 0; t < T; ++t) {
        signed_eta[t] = t % 2 == 0 ? 1.0 : -1.0;
        signed_ranges[t] = {std::min(0.0, signed_eta[t]),
                            std::max(0.0, signed_eta[t])};
      }
      const double expected = static_cast<double>(T) * p;

      auto check = [&](CheckResult& result, double tail, double bound,
                       const std::string& label) {
        const double se =
            std::sqrt(tail * (1.0 - tail) / static_cast<double>(trials));
        std::ostringstream out;
        out.precision(6);
        out << label << " T=" << T << " p=" << p << ": tail " << tail
            << " > bound " << bound << " + 3 SE " << se;
        const std::string text = out.str();
        Record(result, tail <= bound + 3.0 * se, tail - bound - 3.0 * se,
               [&] { return text; });
      };

      for (double delta : {0.1, 0.25, 0.5, 1.0, 2.0}) {
        stream.polarity_ranges = unit_ranges;
        const double tail =
            MonteCarloTail(stream, unit, delta, TailMode::kRelative, trials,
                           options.seed + cell++);
        check(chernoff, tail, ChernoffBound(expected, delta),
              "delta=" + std::to_string(delta));
      }
      for (double fraction : {0.05, 0.1, 0.2, 0.3, 0.5}) {
        const double delta = fraction * static_cast<double>(T);
        stream.polarity_ranges = signed_ranges;
        const double tail =
            MonteCarloTail(stream, signed_eta, delta, TailMode::kAbsolute,
                           trials, options.seed + cell++);
        check(hoeffding, tail, HoeffdingBound(signed_ranges, delta),
              "delta=" + std::to_string(delta));
      }
    }
  }
  report.checks = {chernoff, hoeffding};
  return report;
}

SuiteReport VerifyTransport(const VerifyOptions& options) {
  SuiteReport report{"w1", {}, 0.0};
  SuiteTimer timer(report);
  const std::size_t instances = options.instances ? options.instances : 200;
  CheckResult check = NamedCheck("w1_vs_transport");
  Rng rng(options.seed ^ 0x77317472ULL);
  for (std::size_t s = 0; s < instances; ++s) {
    const std::size_t T = UniformIndex(rng, 1, 8);
    std::vector<double> a(T), r(T);
    for (std::size_t t = 0; t < T; ++t) {
      // Every third pair is coarse so that ties are common.
      a[t] = s % 3 == 0 ? std::round(Uniform(rng, -1, 1) * 4) / 4
                        : Uniform(rng, -1, 1);
      r[t] = s % 3 == 0 ? std::round(Uniform(rng, -1, 1) * 4) / 4
                        : Uniform(rng, -1, 1);
    }
    CostMatrix cost(T);
    for (std::size_t i = 0; i < T; ++i) {
      for (std::size_t j = 0; j < T; ++j) cost(i, j) = std::abs(a[i] - r[j]);
    }
    const double transport =
        BruteForce(MatchObjective::kMinSum, cost, QualityConstraint::None(T))
            .objective /
        static_cast<double>(T);
    std::vector<double> sa = a, sr = r;
    std::sort(sa.begin(), sa.end());
    std::sort(sr.begin(), sr.end());
    const double sorted = DistanceW1(sa, sr);
    const double error = std::abs(sorted - transport);
    Record(check, error <= kAgreementTolerance, error, [&] {
      std::ostringstream out;
      out.precision(12);
      out << "pair " << s << " (T=" << T << "): sorted " << sorted
          << " vs transport " << transport;
      return out.str();
    });
  }
  report.checks = {check};
  return report;
}

SuiteReport VerifyOffline(const VerifyOptions& options) {
  SuiteReport report{"offline", {}, 0.0};
  SuiteTimer timer(report);
  const std::size_t instances = options.instances ? options.instances : 50;
  CheckResult not_worse = NamedCheck("offline_le_online");
  CheckResult joint = NamedCheck("offline_vs_joint_oracle");
  Rng rng(options.seed ^ 0x6f66666c696eULL);
  for (std::size_t s = 0; s < instances; ++s) {
    const std::size_t n = UniformIndex(rng, 2, 4);
    const std::size_t T = UniformIndex(rng, 1, 3);
    const SynthData data = GenerateRandomInstance(
        n, UniformIndex(rng, 1, n), T, PolarityLaw::kSigned, rng());
    RerankConfig config;
    config.kind = kAllDivergenceKinds[s % 3];
    config.objective = RerankObjective::kMinMax;
    config.theta = Uniform(rng, 0.3, 1.0);
    config.prefilter_depth = n;
    config.attention_cutoff = UniformIndex(rng, 1, n);
    config.eval_depth = n;
    config.polarity_mode =
        s % 2 == 0 ? PolarityMode::kAware : PolarityMode::kAgnostic;

    const RunResult online = RerankOnline(data.dataset, data.stream, config);
    const RunResult offline =
        RerankOffline(data.dataset, data.stream, config, 50);
    const double online_value = FinalHorizonObjective(online.ledger, config);
    const double offline_value = FinalHorizonObjective(offline.ledger, config);

    // Joint oracle: every combination of quality-feasible permutations.
    const AttentionModel attention(n, config.attention_cutoff);
    std::vector<std::vector<Assignment>> feasible(T);
    for (std::size_t t = 0; t < T; ++t) {
      const QueryEvent& q = data.stream[t];
      const auto ideal = IdealRanking(q);
      const double rho = DcgAtK(ideal, q.relevance, n);
      const double floor =
          config.theta * rho - kFeasibilityTolerance * std::min(1.0, rho);
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      do {
        if (DcgAtK(order, q.relevance, n) >= floor) {
          feasible[t].emplace_back(order);
        }
      } while (std::next_permutation(order.begin(), order.end()));
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<Assignment> choice(T);
    std::function<void(std::size_t)> enumerate = [&](std::size_t t) {
      if (t == T) {
        best = std::min(best, FinalHorizonObjective(
                                  Replay(data.stream, choice, attention),
                                  config));
        return;
      }
      for (const Assignment& a : feasible[t]) {
        choice[t] = a;
        enumerate(t + 1);
      }
    };
    enumerate(0);

    auto describe = [&] {
      std::ostringstream out;
      out.precision(12);
      out << "instance " << s << " (n=" << n << ", T=" << T << ", "
          << DivergenceKindName(config.kind) << ", "
          << PolarityModeName(config.polarity_mode) << "): online "
          << online_value << ", offline " << offline_value << ", joint "
          << best;
      return out.str();
    };
    Record(not_worse, offline_value <= online_value + 1e-12,
           offline_value - online_value, describe);
    Record(joint, std::abs(offline_value - best) <= kAgreementTolerance,
           offline_value - best, describe);
  }
  report.checks = {not_worse, joint};
  return report;
}

SuiteReport VerifyThetaMonotonicity(const VerifyOptions& options) {
  SuiteReport report{"theta", {}, 0.0};
  SuiteTimer timer(report);
  const std::size_t instances = options.instances ? options.instances : 100;
  CheckResult check = NamedCheck("minmax_nonincreasing_in_theta");
  Rng rng(options.seed ^ 0x7468657461ULL);
  constexpr double kThetas[] = {1.0, 0.9, 0.8, 0.7, 0.6};
  for (std::size_t s = 0; s < instances; ++s) {
    const std::size_t k = UniformIndex(rng, 2, 7);
    const std::size_t n = k + UniformIndex(rng, 0, 5);
    const std::size_t cutoff = UniformIndex(rng, 1, k);
    const StepState state = RandomStepState(
        n, UniformIndex(rng, 1, std::min<std::size_t>(3, n)),
        UniformIndex(rng, 0, 6), cutoff, rng);
    RerankConfig config;
    config.kind = kAllDivergenceKinds[s % 3];
    config.prefilter_depth = k;
    config.attention_cutoff = cutoff;
    config.eval_depth = UniformIndex(rng, 1, k);
    config.polarity_mode =
        s % 2 == 0 ? PolarityMode::kAware : PolarityMode::kAgnostic;
    const AttentionModel attention(n, cutoff);
    std::vector<double> values;
    for (double theta : kThetas) {
      config.theta = theta;
      const StepProblem problem =
          BuildStepProblem(state.ledger, state.next, attention, config);
      const MatchResult result = SolveStep(problem, RerankObjective::kMinMax);
      values.push_back(result.feasible
                           ? result.objective
                           : std::numeric_limits<double>::infinity());
    }
    bool monotone = true;
    double excess = 0.0;
    for (std::size_t g = 1; g < values.size(); ++g) {
      if (values[g] > values[g - 1] + 1e-12) {
        monotone = false;
        excess = std::max(excess, values[g] - values[g - 1]);
      }
    }
    Record(check, monotone, excess, [&] {
      std::ostringstream out;
      out.precision(12);
      out << "subproblem " << s << ":";
      for (double v : values) out << ' ' << v;
      return out.str();
    });
  }
  report.checks = {check};
  return report;
}

const std::vector<std::string>& VerifySuiteNames() {
  static const std::vector<std::string> names = {
      "solver", "theorem2", "bounds", "w1", "offline", "theta"};
  return names;
}

std::vector<SuiteReport> RunSuite(std::string_view name,
                                  const VerifyOptions& options) {
  using Runner = SuiteReport (*)(const VerifyOptions&);
  static const std::pair<std::string_view, Runner> kRunners[] = {
      {"solver", &VerifySolvers},     {"theorem2", &VerifyGroupBound},
      {"bounds", &VerifyBounds},      {"w1", &VerifyTransport},
      {"offline", &VerifyOffline},    {"theta", &VerifyThetaMonotonicity}};
  std::vector<SuiteReport> reports;
  for (const auto& [suite, runner] : kRunners) {
    if (name == "all" || name == suite) reports.push_back(runner(options));
  }
  if (reports.empty()) {
    throw Error(ErrorCode::kConfig, "unknown verify suite '" +
                                        std::string(name) + "'");
  }
  return reports;
}

}  // namespace fairrank
