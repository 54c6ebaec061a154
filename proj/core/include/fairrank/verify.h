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

#ifndef FAIRRANK_VERIFY_H_
#define FAIRRANK_VERIFY_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fairrank {

// Randomized verification harnesses. Each check compares a production
// routine against an independent oracle (exhaustive enumeration, sorting
// free transport, simulation) and records every disagreement.

struct CheckResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double max_error = 0.0;  // worst observed excess over the tolerance
  std::vector<std::string> diagnostics;  // first few failures
  // Informational checks report disagreements without failing the suite.
  bool informational = false;
  bool passed() const { return informational || failures == 0; }
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  bool passed() const;
};

struct VerifyOptions {
  std::size_t instances = 0;  // 0 = the suite's default count
  std::uint64_t seed = 0;
  std::size_t trials = 100000;  // Monte Carlo trials per bounds grid cell
};

// Per-step solvers against the K! oracle: bottleneck (min-max), constrained
// min-sum, and bottleneck preservation of lexicographic refinement.
// Default 200 subproblems per objective, K in 2..7.
SuiteReport VerifySolvers(const VerifyOptions& options);

// group unfairness <= individual unfairness + 1e-9 per divergence kind on
// random signed-polarity instances (n <= 20, G <= 5, T <= 10). Default 500.
SuiteReport VerifyGroupBound(const VerifyOptions& options);

// Monte Carlo tails against the Chernoff and Hoeffding bounds on the grid
// T in {5, 20, 50}, p in {0.1, 0.5}; a tail may exceed its bound by at most
// three binomial standard errors.
SuiteReport VerifyBounds(const VerifyOptions& options);

// Sort-based W1 against the min-cost transport matching (T <= 8).
// Default 200 sequence pairs.
SuiteReport VerifyTransport(const VerifyOptions& options);

// Offline coordinate descent against online re-ranking and exhaustive joint
// enumeration on tiny instances (T <= 3, K_re <= 4). Default 50.
SuiteReport VerifyOffline(const VerifyOptions& options);

// The per-step min-max objective is non-increasing as theta decreases over
// a 5-point grid, for a fixed ledger. Default 100 subproblems.
SuiteReport VerifyThetaMonotonicity(const VerifyOptions& options);

// Suite names accepted by RunSuite, in execution order.
const std::vector<std::string>& VerifySuiteNames();

// Runs one suite by name, or every suite for "all". Throws kConfig on an
// unknown name.
std::vector<SuiteReport> RunSuite(std::string_view name,
                                  const VerifyOptions& options);

}  // namespace fairrank

#endif  // FAIRRANK_VERIFY_H_
