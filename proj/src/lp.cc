// Copyright 2026 The FairLDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairldp/lp.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "fairldp/error.h"

namespace fairldp {

const char* RowKindName(RowKind kind) {
  switch (kind) {
    case RowKind::kTruthfulness: return "truthfulness";
    case RowKind::kLdp: return "ldp";
    case RowKind::kRowMass: return "row_mass";
    case RowKind::kNonNegativity: return "non_negativity";
    case RowKind::kUtility: return "utility";
    case RowKind::kFairness: return "fairness";
    case RowKind::kOther: return "other";
  }
  return "unknown";
}

void LinearConstraintSystem::Validate() const {
  if (num_vars <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "system has no variables");
  }
  for (size_t r = 0; r < rows.size(); ++r) {
    const LinearRow& row = rows[r];
    if (row.coefficients.size() != static_cast<size_t>(num_vars)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "row " + std::to_string(r) + " has " +
                      std::to_string(row.coefficients.size()) +
                      " coefficients, expected " + std::to_string(num_vars));
    }
    if (!std::isfinite(row.bound)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "row " + std::to_string(r) + " has a non-finite bound");
    }
    for (double c : row.coefficients) {
      if (!std::isfinite(c)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "row " + std::to_string(r) + " has a non-finite coefficient");
      }
    }
  }
}

std::vector<double> LinearConstraintSystem::Slacks(
    std::span<const double> x) const {
  std::vector<double> slacks;
  slacks.reserve(rows.size());
  for (const LinearRow& row : rows) {
    double lhs = 0.0;
    for (int j = 0; j < num_vars; ++j) lhs += row.coefficients[j] * x[j];
    slacks.push_back(row.relation == Relation::kLessEqual ? row.bound - lhs
                                                          : lhs - row.bound);
  }
  return slacks;
}

double LinearConstraintSystem::MaxViolation(std::span<const double> x) const {
  double worst = 0.0;
  for (double slack : Slacks(x)) worst = std::max(worst, -slack);
  return worst;
}

namespace {

constexpr double kPivotTolerance = 1e-11;
constexpr double kOptimalityTolerance = 1e-11;
constexpr int kDegenerateRunBeforeBland = 50;
constexpr double kRhsCleanup = 1e-9;

std::string FormatDouble(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3g", v);
  return buffer;
}

// Dense simplex tableau over equality rows B^-1 [A | b] with a separate
// reduced-cost row.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols),
        cells_(static_cast<size_t>(rows) * (cols + 1), 0.0),
        basis_(rows, -1),
        reduced_(cols + 1, 0.0) {}

  double& at(int r, int c) { return cells_[static_cast<size_t>(r) * (cols_ + 1) + c]; }
  double at(int r, int c) const {
    return cells_[static_cast<size_t>(r) * (cols_ + 1) + c];
  }
  double& rhs(int r) { return at(r, cols_); }
  double rhs(int r) const { return at(r, cols_); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::vector<int>& basis() { return basis_; }

  // Installs reduced costs for `cost` relative to the current basis.
  void SetCost(const std::vector<double>& cost) {
    for (int c = 0; c <= cols_; ++c) reduced_[c] = c < cols_ ? cost[c] : 0.0;
    for (int r = 0; r < rows_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) reduced_[c] -= cb * at(r, c);
    }
  }

  double Objective() const { return -reduced_[cols_]; }

  void Pivot(int pr, int pc) {
    const double inv = 1.0 / at(pr, pc);
    for (int c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (int r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double factor = at(r, pc);
      if (factor == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) at(r, c) -= factor * at(pr, c);
      at(r, pc) = 0.0;
    }
    const double factor = reduced_[pc];
    if (factor != 0.0) {
      for (int c = 0; c <= cols_; ++c) reduced_[c] -= factor * at(pr, c);
      reduced_[pc] = 0.0;
    }
    basis_[pr] = pc;
    // Round-off can leave basic values a hair below zero; left alone they
    // feed the ratio test and drift further negative.
    for (int r = 0; r < rows_; ++r) {
      if (rhs(r) < 0.0 && rhs(r) > -kRhsCleanup) rhs(r) = 0.0;
    }
  }

  // Runs primal simplex over columns with allowed[c] set. Returns false when
  // the objective is unbounded below.
  bool Optimize(const std::vector<bool>& allowed, int& pivots, int max_pivots) {
    int degenerate_run = 0;
    while (true) {
      const bool bland = degenerate_run >= kDegenerateRunBeforeBland;
      int enter = -1;
      double best = -kOptimalityTolerance;
      for (int c = 0; c < cols_; ++c) {
        if (!allowed[c] || reduced_[c] >= -kOptimalityTolerance) continue;
        if (bland) {
          enter = c;
          break;
        }
        if (reduced_[c] < best) {
          best = reduced_[c];
          enter = c;
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotTolerance) continue;
        const double candidate = std::max(rhs(r), 0.0) / a;
        if (candidate < ratio - 1e-14 ||
            (candidate <= ratio + 1e-14 && leave >= 0 &&
             basis_[r] < basis_[leave])) {
          ratio = std::min(ratio, candidate);
          leave = r;
        }
      }
      if (leave < 0) return false;
      degenerate_run = ratio <= 1e-14 ? degenerate_run + 1 : 0;
      Pivot(leave, enter);
      if (++pivots > max_pivots) {
        throw Error(ErrorCode::kNumericalFailure,
                    "simplex exceeded " + std::to_string(max_pivots) + " pivots");
      }
    }
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> cells_;
  std::vector<int> basis_;
  std::vector<double> reduced_;
};

// Copy of the initial equality system [A | b], used to recompute the final
// basic solution directly instead of trusting accumulated tableau updates.
class DenseSystem {
 public:
  static DenseSystem FromTableau(const Tableau& tableau) {
    DenseSystem out;
    out.rows_ = tableau.rows();
    out.cols_ = tableau.cols();
    out.cells_.reserve(static_cast<size_t>(out.rows_) * (out.cols_ + 1));
    for (int r = 0; r < out.rows_; ++r) {
      for (int c = 0; c <= out.cols_; ++c) out.cells_.push_back(tableau.at(r, c));
    }
    return out;
  }

  // Solves B z = b for the given basis by Gaussian elimination with partial
  // pivoting. Returns an empty vector when B is numerically singular.
  std::vector<double> SolveBasis(const std::vector<int>& basis) const {
    const int m = rows_;
    std::vector<double> lu(static_cast<size_t>(m) * (m + 1));
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) lu[r * (m + 1) + c] = at(r, basis[c]);
      lu[r * (m + 1) + m] = at(r, cols_);
    }
    for (int c = 0; c < m; ++c) {
      int pivot = c;
      for (int r = c + 1; r < m; ++r) {
        if (std::abs(lu[r * (m + 1) + c]) > std::abs(lu[pivot * (m + 1) + c])) pivot = r;
      }
      if (std::abs(lu[pivot * (m + 1) + c]) < 1e-13) return {};
      if (pivot != c) {
        for (int j = 0; j <= m; ++j) std::swap(lu[c * (m + 1) + j], lu[pivot * (m + 1) + j]);
      }
      const double inv = 1.0 / lu[c * (m + 1) + c];
      for (int r = c + 1; r < m; ++r) {
        const double factor = lu[r * (m + 1) + c] * inv;
        if (factor == 0.0) continue;
        for (int j = c; j <= m; ++j) lu[r * (m + 1) + j] -= factor * lu[c * (m + 1) + j];
      }
    }
    std::vector<double> z(m);
    for (int r = m - 1; r >= 0; --r) {
      double value = lu[r * (m + 1) + m];
      for (int j = r + 1; j < m; ++j) value -= lu[r * (m + 1) + j] * z[j];
      z[r] = value / lu[r * (m + 1) + r];
    }
    return z;
  }

 private:
  double at(int r, int c) const {
    return cells_[static_cast<size_t>(r) * (cols_ + 1) + c];
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> cells_;
};

}  // namespace

LpSolution MinimizeLinear(const LinearConstraintSystem& system,
                          std::span<const double> cost,
                          const LpOptions& options) {
  system.Validate();
  const int n = system.num_vars;
  if (cost.size() != static_cast<size_t>(n)) {
    throw Error(ErrorCode::kInvalidArgument, "cost vector length mismatch");
  }
  const int m = static_cast<int>(system.rows.size());
  if (m == 0) {
    // Unconstrained: optimal at 0 only when the cost vanishes.
    for (double c : cost) {
      if (c != 0.0) return {LpStatus::kUnbounded, {}, 0.0, 0};
    }
    return {LpStatus::kOptimal, std::vector<double>(n, 0.0), 0.0, 0};
  }

  // Columns: u (n), v (n) with x = u - v, one slack per row, then
  // artificials for rows whose slack cannot start in the basis.
  std::vector<double> sign(m);
  std::vector<int> needs_artificial;
  for (int r = 0; r < m; ++r) {
    const LinearRow& row = system.rows[r];
    sign[r] = row.bound < 0.0 ? -1.0 : 1.0;
    const double slack_coef =
        sign[r] * (row.relation == Relation::kLessEqual ? 1.0 : -1.0);
    if (slack_coef < 0.0) needs_artificial.push_back(r);
  }
  const int num_art = static_cast<int>(needs_artificial.size());
  const int slack0 = 2 * n;
  const int art0 = slack0 + m;
  const int cols = art0 + num_art;

  Tableau tableau(m, cols);
  int art = 0;
  for (int r = 0; r < m; ++r) {
    const LinearRow& row = system.rows[r];
    for (int j = 0; j < n; ++j) {
      tableau.at(r, j) = sign[r] * row.coefficients[j];
      tableau.at(r, n + j) = -sign[r] * row.coefficients[j];
    }
    const double slack_coef =
        sign[r] * (row.relation == Relation::kLessEqual ? 1.0 : -1.0);
    tableau.at(r, slack0 + r) = slack_coef;
    tableau.rhs(r) = sign[r] * row.bound;
    if (slack_coef > 0.0) {
      tableau.basis()[r] = slack0 + r;
    } else {
      tableau.at(r, art0 + art) = 1.0;
      tableau.basis()[r] = art0 + art;
      ++art;
    }
  }

  const DenseSystem original = DenseSystem::FromTableau(tableau);
  LpSolution solution{LpStatus::kOptimal, {}, 0.0, 0};
  std::vector<bool> allowed(cols, true);

  if (num_art > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (int c = art0; c < cols; ++c) phase1[c] = 1.0;
    tableau.SetCost(phase1);
    tableau.Optimize(allowed, solution.pivots, options.max_pivots);
    if (tableau.Objective() > 0.5 * options.feasibility_tol) {
      return {LpStatus::kInfeasible, {}, 0.0, solution.pivots};
    }
    // Drive remaining artificials out of the basis where possible; rows
    // where that fails are redundant and keep a zero artificial.
    for (int r = 0; r < m; ++r) {
      if (tableau.basis()[r] < art0) continue;
      int best = -1;
      double best_abs = 1e-9;
      for (int c = 0; c < art0; ++c) {
        if (std::abs(tableau.at(r, c)) > best_abs) {
          best_abs = std::abs(tableau.at(r, c));
          best = c;
        }
      }
      if (best >= 0) tableau.Pivot(r, best);
    }
    for (int c = art0; c < cols; ++c) allowed[c] = false;
  }

  std::vector<double> phase2(cols, 0.0);
  for (int j = 0; j < n; ++j) {
    phase2[j] = cost[j];
    phase2[n + j] = -cost[j];
  }
  tableau.SetCost(phase2);
  if (!tableau.Optimize(allowed, solution.pivots, options.max_pivots)) {
    return {LpStatus::kUnbounded, {}, 0.0, solution.pivots};
  }

  // Two readings of the final basis: the tableau's running values and a
  // fresh solve against the original rows. Keep whichever violates less.
  auto point_from = [&](const std::vector<double>& basic) {
    std::vector<double> columns(cols, 0.0);
    for (int r = 0; r < m; ++r) {
      columns[tableau.basis()[r]] = std::max(basic[r], 0.0);
    }
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) x[j] = columns[j] - columns[n + j];
    return x;
  };
  std::vector<double> running(m);
  for (int r = 0; r < m; ++r) running[r] = tableau.rhs(r);
  solution.x = point_from(running);
  const std::vector<double> resolved = original.SolveBasis(tableau.basis());
  if (!resolved.empty()) {
    std::vector<double> alternative = point_from(resolved);
    if (system.MaxViolation(alternative) < system.MaxViolation(solution.x)) {
      solution.x = std::move(alternative);
    }
  }
  solution.objective = 0.0;
  for (int j = 0; j < n; ++j) solution.objective += cost[j] * solution.x[j];

  const double violation = system.MaxViolation(solution.x);
  if (violation > options.feasibility_tol) {
    throw Error(ErrorCode::kNumericalFailure,
                "simplex point violates a row by " + FormatDouble(violation));
  }
  return solution;
}

std::optional<std::vector<double>> LpFeasible(
    const LinearConstraintSystem& system, const LpOptions& options) {
  const std::vector<double> zero(system.num_vars, 0.0);
  LpSolution solution = MinimizeLinear(system, zero, options);
  if (solution.status == LpStatus::kInfeasible) return std::nullopt;
  return std::move(solution.x);
}

}  // namespace fairldp
