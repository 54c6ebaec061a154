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

#include "cli.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "fairrank/bounds.h"
#include "fairrank/error.h"
#include "fairrank/io.h"
#include "fairrank/metrics.h"
#include "fairrank/rerank.h"
#include "fairrank/synth.h"
#include "fairrank/verify.h"

namespace fairrank::cli {
namespace {

constexpr char kSeedVariable[] = "FAIRRANK_SEED";

std::uint64_t DefaultSeed() {
  const char* value = std::getenv(kSeedVariable);
  if (value == nullptr || *value == '\0') return 0;
  try {
    std::size_t used = 0;
    const std::uint64_t seed = std::stoull(value, &used);
    if (used == std::string(value).size()) return seed;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kConfig,
              std::string(kSeedVariable) + " is not an unsigned integer");
}

// Writes through `emit` to `path`, or to `out` when the path is empty or "-".
void WriteOutput(const std::string& path, std::ostream& out,
                 const std::function<void(std::ostream&)>& emit) {
  if (path.empty() || path == "-") {
    emit(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIo, "cannot write " + path);
  emit(file);
  if (!file) throw Error(ErrorCode::kIo, "failed writing " + path);
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <typename T, typename Parse>
T ParseOrThrow(const std::string& text, Parse parse, const char* what) {
  const auto value = parse(text);
  if (!value) {
    throw Error(ErrorCode::kConfig,
                std::string("unknown ") + what + " '" + text + "'");
  }
  return *value;
}

// Flags shared by `rank` and `sweep`.
struct RankFlags {
  std::string kind = "L1";
  std::string objective = "minmax";
  double theta = 0.8;
  std::size_t prefilter_depth = 50;
  std::size_t attention_cutoff = 10;
  std::size_t eval_depth = 10;
  std::string polarity_mode = "aware";
  std::uint64_t seed = 0;

  void Register(CLI::App& app) {
    app.add_option("--kind", kind, "Divergence: L1, L2Var or W1")
        ->capture_default_str();
    app.add_option("--objective", objective,
                   "none, minmax, minmax-lex or minsum")
        ->capture_default_str();
    app.add_option("--theta", theta, "Retained fraction of ideal DCG")
        ->capture_default_str();
    app.add_option("--k-re", prefilter_depth, "Candidates re-ranked per query")
        ->capture_default_str();
    app.add_option("--k-att", attention_cutoff, "Attention cutoff position")
        ->capture_default_str();
    app.add_option("--k-eval", eval_depth, "DCG/nDCG depth")
        ->capture_default_str();
    app.add_option("--polarity-mode", polarity_mode, "aware or agnostic")
        ->capture_default_str();
    app.add_option("--seed", seed, "Seed (default: $FAIRRANK_SEED or 0)");
  }

  RerankConfig ToConfig() const {
    RerankConfig config;
    config.kind = ParseOrThrow<DivergenceKind>(kind, ParseDivergenceKind,
                                               "divergence kind");
    config.objective = ParseOrThrow<RerankObjective>(
        objective, ParseRerankObjective, "objective");
    config.theta = theta;
    config.prefilter_depth = prefilter_depth;
    config.attention_cutoff = attention_cutoff;
    config.eval_depth = eval_depth;
    config.polarity_mode = ParseOrThrow<PolarityMode>(
        polarity_mode, ParsePolarityMode, "polarity mode");
    config.seed = seed;
    return config;
  }
};

// Bootstrap resample of the queries: draws T queries with replacement,
// keeps their arrival order and renumbers timesteps 1..T. Repeat 0 is the
// original stream.
std::vector<QueryEvent> Resample(const std::vector<QueryEvent>& stream,
                                 std::uint64_t seed, std::size_t repeat) {
  if (repeat == 0 || stream.empty()) return stream;
  const std::uint64_t key = seed ^ (0x9e3779b97f4a7c15ULL * repeat);
  std::vector<std::size_t> picks(stream.size());
  for (std::size_t k = 0; k < picks.size(); ++k) {
    picks[k] = std::min(stream.size() - 1,
                        static_cast<std::size_t>(CounterUniform(key, k) *
                                                 static_cast<double>(stream.size())));
  }
  std::sort(picks.begin(), picks.end());
  std::vector<QueryEvent> sample;
  sample.reserve(picks.size());
  for (std::size_t k = 0; k < picks.size(); ++k) {
    sample.push_back(stream[picks[k]]);
    sample.back().t = static_cast<std::int64_t>(k) + 1;
  }
  return sample;
}

void PrintWarnings(const StreamData& data, std::ostream& err) {
  for (const std::string& w : data.warnings) err << "warning: " << w << '\n';
}

int RunGenerate(const std::string& variant, std::size_t n, std::size_t T,
                std::uint64_t seed, bool all_positive,
                const std::string& out_dir, std::ostream& out) {
  SynthSpec spec;
  spec.variant = ParseOrThrow<SynthVariant>(variant, ParseSynthVariant,
                                            "synthetic variant");
  spec.n = n;
  spec.T = T;
  spec.seed = seed;
  spec.all_positive_polarity = all_positive;
  const SynthData data = GenerateSynth(spec);
  std::filesystem::create_directories(out_dir);
  const auto stream_path = std::filesystem::path(out_dir) / "stream.jsonl";
  const auto groups_path = std::filesystem::path(out_dir) / "groups.csv";
  WriteOutput(stream_path.string(), out, [&](std::ostream& o) {
    WriteStream(o, data.dataset, data.stream);
  });
  WriteOutput(groups_path.string(), out,
              [&](std::ostream& o) { WriteGroups(o, data.dataset); });
  out << stream_path.string() << '\n' << groups_path.string() << '\n';
  return kExitOk;
}

int RunRank(const std::string& stream_path, const std::string& groups_path,
            const RankFlags& flags, bool offline, std::size_t max_sweeps,
            bool raw, const std::string& out_path, std::ostream& out,
            std::ostream& err) {
  const StreamData data = LoadStream(stream_path, raw);
  PrintWarnings(data, err);
  Dataset dataset = data.dataset;
  if (!groups_path.empty()) dataset = LoadGroups(groups_path, dataset);
  const RerankConfig config = flags.ToConfig();
  const RunResult run =
      offline ? RerankOffline(dataset, data.stream, config, max_sweeps)
              : RerankOnline(dataset, data.stream, config);
  WriteOutput(out_path, out, [&](std::ostream& o) {
    WriteRun(o, dataset, data.stream, run);
  });
  err << "ranked " << data.stream.size() << " queries, "
      << run.fallback_count() << " fallbacks\n";
  if (config.objective != RerankObjective::kNone && !data.stream.empty() &&
      run.fallback_count() == data.stream.size()) {
    err << "error: every query was infeasible under theta=" << config.theta
        << '\n';
    return kExitInfeasible;
  }
  return kExitOk;
}

int RunEvaluate(const std::string& run_path, const std::string& baseline_path,
                const std::string& groups_path, const std::string& out_path,
                std::ostream& out) {
  LoadedRun loaded = LoadRun(run_path);
  Dataset dataset = loaded.dataset;
  if (!groups_path.empty()) dataset = LoadGroups(groups_path, dataset);
  RunResult baseline;
  std::string label = "pass-through";
  if (baseline_path.empty()) {
    RerankConfig config = loaded.run.config;
    config.objective = RerankObjective::kNone;
    baseline = RerankOnline(dataset, loaded.stream, config);
  } else {
    LoadedRun other = LoadRun(baseline_path);
    if (other.dataset.ids() != loaded.dataset.ids() ||
        other.stream.size() != loaded.stream.size()) {
      throw Error(ErrorCode::kCoverage,
                  "baseline run ranks a different stream");
    }
    baseline = std::move(other.run);
    label = baseline_path;
  }
  const MetricsReport report = EvaluateRun(loaded.run, dataset, &baseline);
  WriteOutput(out_path, out, [&](std::ostream& o) {
    o << ReportToJson(report, loaded.run, label);
  });
  return kExitOk;
}

struct SweepPoint {
  double theta;
  DivergenceKind kind;
  RerankObjective objective;
  std::size_t repeat;
  PolarityMode mode;
};

int RunSweep(const std::string& stream_path, const std::string& groups_path,
             const std::string& thetas, const std::string& kinds,
             const std::string& objectives, const std::string& modes,
             std::size_t repeats, const RankFlags& flags, std::size_t threads,
             const std::string& out_path, std::ostream& out,
             std::ostream& err) {
  const StreamData data = LoadStream(stream_path);
  PrintWarnings(data, err);
  Dataset dataset = data.dataset;
  if (!groups_path.empty()) dataset = LoadGroups(groups_path, dataset);
  const RerankConfig base = flags.ToConfig();

  std::vector<std::vector<QueryEvent>> samples;
  for (std::size_t r = 0; r <= repeats; ++r) {
    samples.push_back(Resample(data.stream, base.seed, r));
  }
  std::vector<SweepPoint> grid;
  for (const std::string& theta_text : SplitList(thetas)) {
    const double theta = std::stod(theta_text);
    for (const std::string& kind : SplitList(kinds)) {
      for (const std::string& objective : SplitList(objectives)) {
        for (std::size_t r = 0; r <= repeats; ++r) {
          for (const std::string& mode : SplitList(modes)) {
            grid.push_back(
                {theta,
                 ParseOrThrow<DivergenceKind>(kind, ParseDivergenceKind,
                                              "divergence kind"),
                 ParseOrThrow<RerankObjective>(objective, ParseRerankObjective,
                                               "objective"),
                 r,
                 ParseOrThrow<PolarityMode>(mode, ParsePolarityMode,
                                            "polarity mode")});
          }
        }
      }
    }
  }
  for (const SweepPoint& point : grid) {
    RerankConfig config = base;
    config.theta = point.theta;
    config.Validate(dataset.size());
  }

  // Grid points are independent; each worker writes only its own rows.
  std::vector<std::string> rows(grid.size());
  std::vector<std::string> errors(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < grid.size(); k = next++) {
      const SweepPoint& point = grid[k];
      try {
        RerankConfig config = base;
        config.theta = point.theta;
        config.kind = point.kind;
        config.objective = point.objective;
        config.polarity_mode = point.mode;
        const RunResult run =
            RerankOnline(dataset, samples[point.repeat], config);
        const MetricsReport report = EvaluateRun(run, dataset);
        const auto kind = static_cast<std::size_t>(point.kind);
        std::ostringstream row;
        row.precision(12);
        row << point.theta << '\t' << DivergenceKindName(point.kind) << '\t'
            << RerankObjectiveName(point.objective) << '\t' << point.repeat
            << '\t' << PolarityModeName(point.mode) << '\t'
            << report.aware.individual[kind] << '\t'
            << report.agnostic.individual[kind] << '\t'
            << report.aware.group[kind] << '\t' << report.agnostic.group[kind]
            << '\t' << report.aware.iaa << '\t' << report.agnostic.iaa << '\t'
            << report.mean_ndcg << '\t' << report.min_ndcg << '\t'
            << report.fallback_count << '\n';
        rows[k] = row.str();
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(
      1, std::min(threads ? threads : std::thread::hardware_concurrency(),
                  grid.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw Error(ErrorCode::kValidation, e);
  }
  WriteOutput(out_path, out, [&](std::ostream& o) {
    o << "theta\tkind\tobjective\trepeat\tpolarity_mode\t"
         "individual_aware\tindividual_agnostic\tgroup_aware\t"
         "group_agnostic\tiaa_aware\tiaa_agnostic\tmean_ndcg\tmin_ndcg\t"
         "fallbacks\n";
    for (const std::string& row : rows) o << row;
  });
  return kExitOk;
}

int RunVerify(const std::string& suite, std::size_t instances,
              std::uint64_t seed, std::size_t trials, std::ostream& out) {
  VerifyOptions options;
  options.instances = instances;
  options.seed = seed;
  options.trials = trials;
  bool passed = true;
  for (const SuiteReport& report : RunSuite(suite, options)) {
    passed = passed && report.passed();
    out << "suite " << report.suite << ": "
        << (report.passed() ? "PASS" : "FAIL") << " (" << report.seconds
        << " s)\n";
    for (const CheckResult& check : report.checks) {
      out << "  " << check.name << ": " << check.cases << " cases, "
          << check.failures << " failures";
      if (check.informational) out << " (informational)";
      if (check.failures > 0) out << ", max excess " << check.max_error;
      out << '\n';
      for (const std::string& d : check.diagnostics) out << "    " << d << '\n';
    }
  }
  return passed ? kExitOk : kExitVerifyFailed;
}

int RunSplit(const std::string& stream_path, double fraction,
             std::uint64_t seed, const std::string& out_a,
             const std::string& out_b, std::ostream& out) {
  const StreamData data = LoadStream(stream_path);
  const auto [first, second] = SplitByQueryId(data.stream, fraction, seed);
  WriteOutput(out_a, out,
              [&](std::ostream& o) { WriteStream(o, data.dataset, first); });
  WriteOutput(out_b, out,
              [&](std::ostream& o) { WriteStream(o, data.dataset, second); });
  return kExitOk;
}

}  // namespace

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Amortized, polarity-aware individual fairness for rankings"};
  app.name("fairrank");
  app.require_subcommand(1);
  std::function<int()> command;

  std::uint64_t seed = 0;
  try {
    seed = DefaultSeed();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  // generate
  std::string variant = "binary";
  std::size_t n = 200;
  std::size_t T = 16;
  bool all_positive = false;
  std::string out_dir = ".";
  auto* generate = app.add_subcommand("generate", "Write a synthetic stream");
  generate->add_option("--variant", variant, "binary or continuous")
      ->capture_default_str();
  generate->add_option("--n", n, "Individuals")->capture_default_str();
  generate->add_option("--T", T, "Queries")->capture_default_str();
  generate->add_option("--seed", seed, "Seed (default: $FAIRRANK_SEED or 0)");
  generate->add_flag("--all-positive", all_positive,
                     "Give every query polarity +1");
  generate->add_option("--out", out_dir,
                       "Directory for stream.jsonl and groups.csv")
      ->capture_default_str();
  generate->callback([&] {
    command = [&] {
      return RunGenerate(variant, n, T, seed, all_positive, out_dir, out);
    };
  });

  // rank
  RankFlags rank_flags;
  rank_flags.seed = seed;
  std::string stream_path;
  std::string groups_path;
  std::string out_path;
  bool offline = false;
  bool raw = false;
  std::size_t max_sweeps = 10;
  auto* rank = app.add_subcommand("rank", "Re-rank a query stream");
  rank->add_option("--stream", stream_path, "Stream file")->required();
  rank->add_option("--groups", groups_path, "Groups CSV");
  rank_flags.Register(*rank);
  rank->add_flag("--offline", offline, "Coordinate descent after online pass");
  rank->add_option("--max-sweeps", max_sweeps, "Offline sweep limit")
      ->capture_default_str();
  rank->add_flag("--raw", raw, "Renormalize unnormalized relevance");
  rank->add_option("--out", out_path, "Run file (default: stdout)");
  rank->callback([&] {
    command = [&] {
      return RunRank(stream_path, groups_path, rank_flags, offline, max_sweeps,
                     raw, out_path, out, err);
    };
  });

  // evaluate
  std::string run_path;
  std::string baseline_path;
  auto* evaluate = app.add_subcommand("evaluate", "Report metrics of a run");
  evaluate->add_option("--run", run_path, "Run file")->required();
  evaluate->add_option("--baseline-run", baseline_path,
                       "Baseline run (default: pass-through of the same stream)");
  evaluate->add_option("--groups", groups_path, "Groups CSV");
  evaluate->add_option("--out", out_path, "Report file (default: stdout)");
  evaluate->callback([&] {
    command = [&] {
      return RunEvaluate(run_path, baseline_path, groups_path, out_path, out);
    };
  });

  // sweep
  RankFlags sweep_flags;
  sweep_flags.seed = seed;
  std::string thetas = "1,0.9,0.8,0.7,0.6";
  std::string kinds = "L1,L2Var,W1";
  std::string objectives = "minmax";
  std::string modes = "aware,agnostic";
  std::size_t repeats = 0;
  std::size_t threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Theta/kind/objective grid");
  sweep->add_option("--stream", stream_path, "Stream file")->required();
  sweep->add_option("--groups", groups_path, "Groups CSV");
  sweep_flags.Register(*sweep);
  sweep->add_option("--thetas", thetas, "Comma-separated theta grid")
      ->capture_default_str();
  sweep->add_option("--kinds", kinds, "Comma-separated divergence kinds")
      ->capture_default_str();
  sweep->add_option("--objectives", objectives, "Comma-separated objectives")
      ->capture_default_str();
  sweep->add_option("--polarity-modes", modes,
                    "Comma-separated optimization polarity modes")
      ->capture_default_str();
  sweep->add_option("--repeats", repeats,
                    "Bootstrap resamples in addition to the original stream")
      ->capture_default_str();
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  sweep->add_option("--out", out_path, "TSV file (default: stdout)");
  sweep->callback([&] {
    command = [&] {
      return RunSweep(stream_path, groups_path, thetas, kinds, objectives,
                      modes, repeats, sweep_flags, threads, out_path, out, err);
    };
  });

  // verify
  std::string suite = "all";
  std::size_t instances = 0;
  std::size_t trials = 100000;
  auto* verify = app.add_subcommand("verify", "Run oracle cross-checks");
  verify->add_option("--suite", suite,
                     "all, solver, theorem2, bounds, w1, offline or theta")
      ->capture_default_str();
  verify->add_option("--instances", instances,
                     "Instances per check (0 = suite default)")
      ->capture_default_str();
  verify->add_option("--seed", seed, "Seed (default: $FAIRRANK_SEED or 0)");
  verify->add_option("--trials", trials, "Monte Carlo trials per grid cell")
      ->capture_default_str();
  verify->callback([&] {
    command = [&] { return RunVerify(suite, instances, seed, trials, out); };
  });

  // split
  double fraction = 0.5;
  std::string out_a;
  std::string out_b;
  auto* split = app.add_subcommand("split", "Split a stream by query id hash");
  split->add_option("--stream", stream_path, "Stream file")->required();
  split->add_option("--fraction", fraction, "Share of the first output")
      ->capture_default_str();
  split->add_option("--seed", seed, "Hash seed");
  split->add_option("--out-a", out_a, "First stream file")->required();
  split->add_option("--out-b", out_b, "Second stream file")->required();
  split->callback([&] {
    command = [&] {
      return RunSplit(stream_path, fraction, seed, out_a, out_b, out);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }
  try {
    return command();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace fairrank::cli
