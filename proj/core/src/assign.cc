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

#include "fairrank/assign.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <tuple>

#include "fairrank/error.h"
#include "fairrank/ranking.h"

namespace fairrank {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MatchResult Infeasible() {
  MatchResult r;
  r.feasible = false;
  return r;
}

double Bottleneck(const CostMatrix& d, std::span<const std::size_t> column_of) {
  double worst = -kInf;
  for (std::size_t i = 0; i < column_of.size(); ++i) {
    worst = std::max(worst, d(i, column_of[i]));
  }
  return worst;
}

double Total(const CostMatrix& c, std::span<const std::size_t> column_of) {
  double total = 0.0;
  for (std::size_t i = 0; i < column_of.size(); ++i) {
    total += c(i, column_of[i]);
  }
  return total;
}

// Reduced problem on a subset of rows/columns with part of the quality
// already committed by fixed edges.
QualityConstraint Reduce(const QualityConstraint& quality,
                         std::span<const std::size_t> rows,
                         std::span<const std::size_t> cols,
                         double committed) {
  QualityConstraint out;
  out.gain = quality.gain.Select(rows, cols);
  out.target = quality.target - committed;
  out.tolerance = quality.tolerance;
  return out;
}

}  // namespace

CostMatrix::CostMatrix(const std::vector<std::vector<double>>& rows)
    : k_(rows.size()), values_(rows.size() * rows.size()) {
  for (std::size_t i = 0; i < k_; ++i) {
    if (rows[i].size() != k_) {
      throw Error(ErrorCode::kPrecondition, "cost matrix must be square");
    }
    std::copy(rows[i].begin(), rows[i].end(), values_.begin() + i * k_);
  }
}

CostMatrix CostMatrix::Select(std::span<const std::size_t> rows,
                              std::span<const std::size_t> cols) const {
  if (rows.size() != cols.size()) {
    throw Error(ErrorCode::kPrecondition, "submatrix must be square");
  }
  CostMatrix out(rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      out(a, b) = (*this)(rows[a], cols[b]);
    }
  }
  return out;
}

QualityConstraint QualityConstraint::Dcg(std::span<const double> relevance,
                                         double target, std::size_t depth) {
  QualityConstraint q;
  const std::size_t k = relevance.size();
  q.gain = CostMatrix(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k && j < depth; ++j) {
      q.gain(i, j) = relevance[i] * PositionDiscount(j + 1);
    }
  }
  q.target = target;
  return q;
}

QualityConstraint QualityConstraint::None(std::size_t k) {
  QualityConstraint q;
  q.gain = CostMatrix(k, 0.0);
  q.target = 0.0;
  return q;
}

double QualityConstraint::Value(std::span<const std::size_t> column_of) const {
  return Total(gain, column_of);
}

MatchResult HungarianMinCost(const CostMatrix& costs) {
  // Shortest augmenting paths with row/column potentials. Forbidden edges
  // stay at +inf reduced cost, so an exhausted search means no perfect
  // matching exists over the allowed edges.
  const std::size_t n = costs.size();
  MatchResult result;
  if (n == 0) {
    result.feasible = true;
    return result;
  }
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<double> minv(n + 1);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = costs(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 == 0 || !std::isfinite(delta)) return Infeasible();
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  result.column_of.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) result.column_of[match[j] - 1] = j - 1;
  result.objective = Total(costs, result.column_of);
  result.feasible = std::isfinite(result.objective);
  return result;
}

MatchResult MaxGainMatching(const CostMatrix& gain,
                            const EdgePredicate& allowed) {
  const std::size_t k = gain.size();
  CostMatrix costs(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      costs(i, j) = allowed(i, j) ? -gain(i, j) : kForbidden;
    }
  }
  MatchResult r = HungarianMinCost(costs);
  if (!r.feasible) return r;
  r.quality = Total(gain, r.column_of);
  r.objective = r.quality;
  return r;
}

MatchResult MaxDcgMatching(const EdgePredicate& allowed,
                           std::span<const double> relevance,
                           std::size_t depth) {
  const auto q = QualityConstraint::Dcg(relevance, 0.0, depth);
  return MaxGainMatching(q.gain, allowed);
}

MatchResult BottleneckWithQuality(const CostMatrix& d,
                                  const QualityConstraint& quality) {
  const std::size_t k = d.size();
  if (k == 0) {
    MatchResult r;
    r.feasible = quality.Satisfied(0.0);
    r.objective = -kInf;
    return r;
  }
  std::vector<double> values;
  values.reserve(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (std::isfinite(d(i, j))) values.push_back(d(i, j));
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.empty()) return Infeasible();

  auto solve_at = [&](double z) {
    return MaxGainMatching(quality.gain, [&](std::size_t i, std::size_t j) {
      return d(i, j) <= z;
    });
  };
  auto ok = [&](const MatchResult& r) {
    return r.feasible && quality.Satisfied(r.quality);
  };

  MatchResult best = solve_at(values.back());
  if (!ok(best)) return Infeasible();
  // Feasibility is monotone in the threshold: find the smallest feasible one.
  std::size_t lo = 0, hi = values.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    MatchResult r = solve_at(values[mid]);
    if (ok(r)) {
      hi = mid;
      best = std::move(r);
    } else {
      lo = mid + 1;
    }
  }
  best.objective = Bottleneck(d, best.column_of);
  return best;
}

MatchResult LexicographicRefine(const CostMatrix& d,
                                const QualityConstraint& quality,
                                const MatchResult& base) {
  const std::size_t k = d.size();
  if (!base.feasible || k <= 1) return base;

  // Columns that look identical to every row are interchangeable; only one
  // representative per class needs to be tried.
  std::vector<std::size_t> column_class(k);
  {
    std::map<std::vector<double>, std::size_t> classes;
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<double> signature;
      signature.reserve(2 * k);
      for (std::size_t i = 0; i < k; ++i) {
        signature.push_back(d(i, j));
        signature.push_back(quality.gain(i, j));
      }
      column_class[j] =
          classes.emplace(std::move(signature), classes.size()).first->second;
    }
  }

  std::vector<std::size_t> rows(k), cols(k);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  std::vector<std::size_t> current = base.column_of;  // full-size row -> col
  std::vector<std::size_t> result(k, 0);
  double committed = 0.0;

  while (!rows.empty()) {
    double z = -kInf;
    for (std::size_t i : rows) z = std::max(z, d(i, current[i]));
    std::size_t critical = rows.front();
    for (std::size_t i : rows) {
      if (d(i, current[i]) == z) {
        critical = i;
        break;
      }
    }
    std::vector<std::size_t> rest_rows;
    for (std::size_t i : rows) {
      if (i != critical) rest_rows.push_back(i);
    }

    // Candidate key: (max, min) of the fixed edge and the reduced
    // bottleneck, then higher total quality.
    bool found = false;
    std::tuple<double, double, double> best_key;
    std::size_t best_col = 0;
    MatchResult best_sub;
    std::vector<std::size_t> best_rest_cols;
    std::vector<char> tried(k, 0);
    for (std::size_t j : cols) {
      if (d(critical, j) > z || tried[column_class[j]]) continue;
      tried[column_class[j]] = 1;
      std::vector<std::size_t> rest_cols;
      for (std::size_t c : cols) {
        if (c != j) rest_cols.push_back(c);
      }
      const double fixed_gain = quality.gain(critical, j);
      MatchResult sub = BottleneckWithQuality(
          d.Select(rest_rows, rest_cols),
          Reduce(quality, rest_rows, rest_cols, committed + fixed_gain));
      if (!sub.feasible) continue;
      const double edge = d(critical, j);
      const auto key = std::make_tuple(std::max(edge, sub.objective),
                                       std::min(edge, sub.objective),
                                       -(fixed_gain + sub.quality));
      if (!found || key < best_key) {
        found = true;
        best_key = key;
        best_col = j;
        best_sub = std::move(sub);
        best_rest_cols = std::move(rest_cols);
      }
    }
    if (!found) return base;

    result[critical] = best_col;
    committed += quality.gain(critical, best_col);
    for (std::size_t a = 0; a < rest_rows.size(); ++a) {
      current[rest_rows[a]] = best_rest_cols[best_sub.column_of[a]];
    }
    rows = std::move(rest_rows);
    cols = std::move(best_rest_cols);
  }

  MatchResult refined;
  refined.column_of = std::move(result);
  refined.quality = quality.Value(refined.column_of);
  refined.feasible = quality.Satisfied(refined.quality);
  refined.objective = Bottleneck(d, refined.column_of);
  if (!refined.feasible || refined.objective != base.objective ||
      SortedEdgeValues(d, base.column_of) <
          SortedEdgeValues(d, refined.column_of)) {
    return base;
  }
  return refined;
}

namespace {

// Depth-first branch-and-bound for ConstrainedMinSum.
class MinSumSearch {
 public:
  MinSumSearch(const CostMatrix& costs, const QualityConstraint& quality,
               double lambda, std::size_t node_limit)
      : costs_(costs),
        quality_(quality),
        lambda_(lambda),
        node_limit_(node_limit),
        k_(costs.size()),
        assigned_(k_, 0),
        used_(k_, 0) {}

  void Seed(const MatchResult& incumbent) {
    if (incumbent.feasible) {
      best_ = incumbent.column_of;
      best_cost_ = incumbent.objective;
    }
  }

  void Run() { Visit(0, 0.0, 0.0); }

  bool has_solution() const { return !best_.empty(); }
  bool exhausted() const { return !aborted_; }
  const std::vector<std::size_t>& best() const { return best_; }

 private:
  void Visit(std::size_t row, double cost, double gain) {
    if (aborted_) return;
    if (node_limit_ != 0 && ++nodes_ > node_limit_) {
      aborted_ = true;
      return;
    }
    if (row == k_) {
      if (quality_.Satisfied(gain) && cost < best_cost_) {
        best_cost_ = cost;
        best_ = assigned_;
      }
      return;
    }
    std::vector<std::size_t> rest_rows, rest_cols;
    for (std::size_t i = row; i < k_; ++i) rest_rows.push_back(i);
    for (std::size_t j = 0; j < k_; ++j) {
      if (!used_[j]) rest_cols.push_back(j);
    }
    const CostMatrix sub_gain = quality_.gain.Select(rest_rows, rest_cols);
    const CostMatrix sub_cost = costs_.Select(rest_rows, rest_cols);
    // Quality reachable from here.
    const MatchResult reach =
        MaxGainMatching(sub_gain, [&](std::size_t a, std::size_t b) {
          return std::isfinite(sub_cost(a, b));
        });
    if (!reach.feasible || !quality_.Satisfied(gain + reach.quality)) return;
    // Lagrangian lower bound on the remaining cost.
    CostMatrix relaxed(rest_rows.size());
    for (std::size_t a = 0; a < rest_rows.size(); ++a) {
      for (std::size_t b = 0; b < rest_cols.size(); ++b) {
        relaxed(a, b) = sub_cost(a, b) - lambda_ * sub_gain(a, b);
      }
    }
    const MatchResult lagr = HungarianMinCost(relaxed);
    if (!lagr.feasible) return;
    const double bound = std::max(
        cost + lagr.objective +
            lambda_ * (quality_.target - quality_.tolerance - gain),
        cost + HungarianMinCost(sub_cost).objective);
    if (bound >= best_cost_ - 1e-12) return;

    std::vector<std::size_t> order;
    for (std::size_t j : rest_cols) {
      if (std::isfinite(costs_(row, j))) order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return costs_(row, a) - lambda_ * quality_.gain(row, a) <
                              costs_(row, b) - lambda_ * quality_.gain(row, b);
                     });
    for (std::size_t j : order) {
      used_[j] = 1;
      assigned_[row] = j;
      Visit(row + 1, cost + costs_(row, j), gain + quality_.gain(row, j));
      used_[j] = 0;
      if (aborted_) return;
    }
  }

  const CostMatrix& costs_;
  const QualityConstraint& quality_;
  double lambda_;
  std::size_t node_limit_;
  std::size_t k_;
  std::vector<std::size_t> assigned_;
  std::vector<char> used_;
  std::vector<std::size_t> best_;
  double best_cost_ = kInf;
  std::size_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

MatchResult ConstrainedMinSum(const CostMatrix& costs,
                              const QualityConstraint& quality,
                              MinSumOptions options) {
  const std::size_t k = costs.size();
  auto finish = [&](std::vector<std::size_t> column_of, bool optimal) {
    MatchResult r;
    r.column_of = std::move(column_of);
    r.objective = Total(costs, r.column_of);
    r.quality = quality.Value(r.column_of);
    r.feasible = true;
    r.proven_optimal = optimal;
    return r;
  };

  MatchResult plain = HungarianMinCost(costs);
  if (!plain.feasible) return Infeasible();
  if (quality.Satisfied(quality.Value(plain.column_of))) {
    return finish(plain.column_of, true);
  }
  const MatchResult reach =
      MaxGainMatching(quality.gain, [&](std::size_t i, std::size_t j) {
        return std::isfinite(costs(i, j));
      });
  if (!reach.feasible || !quality.Satisfied(reach.quality)) {
    return Infeasible();
  }

  // Lagrangian dual: min sum(c - lambda*g) + lambda*(target - tol) is a lower
  // bound for every lambda >= 0.
  auto relaxed = [&](double lambda) {
    CostMatrix m(k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        m(i, j) = costs(i, j) - lambda * quality.gain(i, j);
      }
    }
    return HungarianMinCost(m);
  };
  double best_bound = plain.objective;
  MatchResult incumbent;
  incumbent.feasible = false;
  incumbent.objective = kInf;
  auto consider = [&](double lambda, const MatchResult& r) {
    const double gain = quality.Value(r.column_of);
    best_bound = std::max(
        best_bound,
        r.objective + lambda * (quality.target - quality.tolerance));
    if (quality.Satisfied(gain)) {
      const double cost = Total(costs, r.column_of);
      if (cost < incumbent.objective) {
        incumbent.column_of = r.column_of;
        incumbent.objective = cost;
        incumbent.feasible = true;
      }
      return true;
    }
    return false;
  };

  double lo = 0.0, hi = 1.0;
  for (int step = 0; step < 200; ++step) {
    if (consider(hi, relaxed(hi))) break;
    lo = hi;
    hi *= 2.0;
  }
  if (!incumbent.feasible) {
    incumbent.column_of = reach.column_of;
    incumbent.objective = Total(costs, reach.column_of);
    incumbent.feasible = true;
  }
  for (int step = 0; step < 100 && hi - lo > 1e-15 * hi; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (consider(mid, relaxed(mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double gap_tol = 1e-12 * std::max(1.0, std::abs(incumbent.objective));
  if (incumbent.objective - best_bound <= gap_tol) {
    return finish(incumbent.column_of, true);
  }

  const std::size_t limit =
      options.node_limit != 0 ? options.node_limit : (k <= 20 ? 0 : 200000);
  MinSumSearch search(costs, quality, hi, limit);
  search.Seed(incumbent);
  search.Run();
  return finish(search.best(), search.exhausted());
}

std::vector<double> SortedEdgeValues(const CostMatrix& matrix,
                                     std::span<const std::size_t> column_of) {
  std::vector<double> values;
  values.reserve(column_of.size());
  for (std::size_t i = 0; i < column_of.size(); ++i) {
    values.push_back(matrix(i, column_of[i]));
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

MatchResult BruteForce(MatchObjective objective, const CostMatrix& matrix,
                       const QualityConstraint& quality) {
  const std::size_t k = matrix.size();
  if (k > kBruteForceMaxSize) {
    throw Error(ErrorCode::kPrecondition,
                "brute force enumeration is limited to K <= " +
                    std::to_string(kBruteForceMaxSize) + ", got " +
                    std::to_string(k));
  }
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  MatchResult best = Infeasible();
  std::vector<double> best_lex;
  do {
    bool allowed = true;
    for (std::size_t i = 0; i < k && allowed; ++i) {
      allowed = std::isfinite(matrix(i, perm[i]));
    }
    if (!allowed) continue;
    const double q = quality.Value(perm);
    if (!quality.Satisfied(q)) continue;
    bool better = false;
    std::vector<double> lex;
    switch (objective) {
      case MatchObjective::kMinMax: {
        const double value = Bottleneck(matrix, perm);
        better = !best.feasible || value < best.objective ||
                 (value == best.objective && q > best.quality);
        if (better) best.objective = value;
        break;
      }
      case MatchObjective::kMinSum: {
        const double value = Total(matrix, perm);
        better = !best.feasible || value < best.objective ||
                 (value == best.objective && q > best.quality);
        if (better) best.objective = value;
        break;
      }
      case MatchObjective::kLexMax: {
        lex = SortedEdgeValues(matrix, perm);
        better = !best.feasible || lex < best_lex ||
                 (lex == best_lex && q > best.quality);
        if (better) {
          best.objective = lex.empty() ? -kInf : lex.front();
          best_lex = std::move(lex);
        }
        break;
      }
    }
    if (better) {
      best.column_of = perm;
      best.quality = q;
      best.feasible = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (k == 0) {
    best.feasible = quality.Satisfied(0.0);
    best.objective = objective == MatchObjective::kMinSum ? 0.0 : -kInf;
  }
  return best;
}

}  // namespace fairrank
