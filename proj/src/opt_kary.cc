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

#include "fairldp/opt_kary.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "fairldp/error.h"

namespace fairldp {

void SolverConfig::Validate() const {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidEpsilon,
                "epsilon must be positive, got " + std::to_string(epsilon));
  }
  if (!(zeta >= 0.0 && zeta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "zeta must lie in [0, 1], got " + std::to_string(zeta));
  }
  if (!(objective_tol > 0.0) || !(feasibility_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerances must be positive");
  }
  if (max_bisection_iters < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_bisection_iters must be >= 1");
  }
}

int OffDiagonalIndex(int k, int i, int j) {
  return i * (k - 1) + (j < i ? j : j - 1);
}

MechanismMatrix MatrixFromOffDiagonals(int k, std::span<const double> x) {
  std::vector<double> entries(static_cast<size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) {
    double off = 0.0;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      const double v = std::clamp(x[OffDiagonalIndex(k, i, j)], 0.0, 1.0);
      entries[static_cast<size_t>(i) * k + j] = v;
      off += v;
    }
    entries[static_cast<size_t>(i) * k + i] = std::max(0.0, 1.0 - off);
  }
  return MechanismMatrix(k, std::move(entries));
}

std::vector<double> OffDiagonalsOf(const MechanismMatrix& q) {
  const int k = q.k();
  std::vector<double> x(static_cast<size_t>(k) * (k - 1));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (j != i) x[OffDiagonalIndex(k, i, j)] = q.at(i, j);
    }
  }
  return x;
}

namespace {

// constant + coefficients . x
struct Affine {
  std::vector<double> coefficients;
  double constant = 0.0;

  explicit Affine(int n) : coefficients(n, 0.0) {}

  Affine& operator+=(const Affine& other) {
    for (size_t j = 0; j < coefficients.size(); ++j) {
      coefficients[j] += other.coefficients[j];
    }
    constant += other.constant;
    return *this;
  }
  Affine Scaled(double factor) const {
    Affine out = *this;
    for (double& c : out.coefficients) c *= factor;
    out.constant *= factor;
    return out;
  }
};

// Entry (i, j) of Q as an affine function of the off-diagonal unknowns.
Affine Entry(int k, int i, int j) {
  Affine out(k * (k - 1));
  if (i != j) {
    out.coefficients[OffDiagonalIndex(k, i, j)] = 1.0;
    return out;
  }
  out.constant = 1.0;
  for (int a = 0; a < k; ++a) {
    if (a != i) out.coefficients[OffDiagonalIndex(k, i, a)] = -1.0;
  }
  return out;
}

// Row meaning `expr (<= | >=) 0`.
LinearRow RowOf(const Affine& expr, Relation relation, RowKind kind) {
  return {expr.coefficients, relation, -expr.constant, kind};
}

double ComputeDelta(const JointDistribution& dist, const MechanismMatrix& q) {
  return Delta(InducedDistribution(dist, q));
}

LinearConstraintSystem WithFairness(const LinearConstraintSystem& base,
                                    const JointDistribution& dist, double t) {
  LinearConstraintSystem system = base;
  for (LinearRow& row : FairnessRowsAt(dist, t)) {
    system.rows.push_back(std::move(row));
  }
  return system;
}

}  // namespace

LinearConstraintSystem AssembleConstraints(const JointDistribution& dist,
                                           const SolverConfig& config) {
  config.Validate();
  const int k = dist.k();
  const int n = k * (k - 1);
  const double e = std::exp(config.epsilon);
  LinearConstraintSystem system;
  system.num_vars = n;

  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      Affine lie = Entry(k, i, j).Scaled(-1.0);
      Affine own_truth = Entry(k, i, i);
      own_truth += lie;
      system.rows.push_back(
          RowOf(own_truth, Relation::kGreaterEqual, RowKind::kTruthfulness));
      Affine column_truth = Entry(k, j, j);
      column_truth += lie;
      system.rows.push_back(
          RowOf(column_truth, Relation::kGreaterEqual, RowKind::kTruthfulness));
    }
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      Affine ldp = Entry(k, j, j);
      ldp += Entry(k, i, j).Scaled(-e);
      system.rows.push_back(RowOf(ldp, Relation::kLessEqual, RowKind::kLdp));
    }
  }
  for (int i = 0; i < k; ++i) {
    Affine mass(n);
    for (int j = 0; j < k; ++j) {
      if (j != i) mass += Entry(k, i, j);
    }
    mass.constant = -1.0;
    system.rows.push_back(RowOf(mass, Relation::kLessEqual, RowKind::kRowMass));
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      system.rows.push_back(RowOf(Entry(k, i, j), Relation::kGreaterEqual,
                                  RowKind::kNonNegativity));
    }
  }
  Affine utility(n);
  for (int i = 0; i < k; ++i) utility += Entry(k, i, i).Scaled(dist.group_prob(i));
  utility.constant -= 1.0 - config.zeta;
  system.rows.push_back(RowOf(utility, Relation::kGreaterEqual, RowKind::kUtility));
  return system;
}

std::vector<LinearRow> FairnessRowsAt(const JointDistribution& dist, double t) {
  const int k = dist.k();
  const int n = k * (k - 1);
  std::vector<LinearRow> rows;
  rows.reserve(2 * k);
  for (int a = 0; a < k; ++a) {
    Affine positive(n);
    Affine mass(n);
    for (int j = 0; j < k; ++j) {
      const Affine entry = Entry(k, j, a);
      positive += entry.Scaled(dist.pos_rate(j) * dist.group_prob(j));
      mass += entry.Scaled(dist.pos_marginal() * dist.group_prob(j));
    }
    Affine upper = positive;
    upper += mass.Scaled(-(1.0 + t));
    rows.push_back(RowOf(upper, Relation::kLessEqual, RowKind::kFairness));
    Affine lower = mass.Scaled(1.0 - t);
    lower += positive.Scaled(-1.0);
    rows.push_back(RowOf(lower, Relation::kLessEqual, RowKind::kFairness));
  }
  return rows;
}

KaryDesignResult SolveOptK(const JointDistribution& dist,
                           const SolverConfig& config) {
  config.Validate();
  const int k = dist.k();
  const LinearConstraintSystem base = AssembleConstraints(dist, config);
  const LpOptions lp_options{config.feasibility_tol};

  std::optional<std::vector<double>> start = LpFeasible(base, lp_options);
  if (!start) {
    throw Error(ErrorCode::kInfeasibleBudget,
                "no truthful " + std::to_string(config.epsilon) +
                    "-LDP mechanism has error <= zeta = " +
                    std::to_string(config.zeta));
  }
  const double t_max = std::max(1.0 / dist.pos_marginal() - 1.0, 1.0);
  if (!LpFeasible(WithFairness(base, dist, t_max), lp_options)) {
    throw Error(ErrorCode::kInfeasibleBudget,
                "fairness rows at the trivial level t_max are infeasible");
  }

  Certificate certificate;
  double lo = 0.0;
  // Any feasible point bounds the optimum by its own objective value.
  double hi = std::min(t_max, ComputeDelta(dist, MatrixFromOffDiagonals(k, *start)));
  while (hi - lo > config.objective_tol &&
         certificate.iterations < config.max_bisection_iters) {
    const double mid = 0.5 * (lo + hi);
    std::optional<std::vector<double>> point =
        LpFeasible(WithFairness(base, dist, mid), lp_options);
    certificate.trace.push_back({lo, hi, mid, point.has_value()});
    if (point) {
      hi = std::max(lo, std::min(mid, ComputeDelta(dist, MatrixFromOffDiagonals(k, *point))));
    } else {
      lo = mid;
    }
    ++certificate.iterations;
  }
  certificate.lo = lo;
  certificate.hi = hi;

  // Among mechanisms at level hi, maximize sum_i q_ii p_i, i.e. minimize
  // sum_i p_i sum_{j != i} q_ij.
  std::vector<double> cost(static_cast<size_t>(k) * (k - 1));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (j != i) cost[OffDiagonalIndex(k, i, j)] = dist.group_prob(i);
    }
  }
  const LinearConstraintSystem final_system = WithFairness(base, dist, hi);
  LpSolution refined = MinimizeLinear(final_system, cost, lp_options);
  if (refined.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kNumericalFailure,
                "utility pass failed at the final fairness level");
  }
  MechanismMatrix q = MatrixFromOffDiagonals(k, refined.x);
  const std::vector<double> x = OffDiagonalsOf(q);
  const std::vector<double> slacks = base.Slacks(x);
  certificate.min_ldp_slack = std::numeric_limits<double>::infinity();
  for (size_t r = 0; r < slacks.size(); ++r) {
    certificate.slacks.push_back({base.rows[r].kind, slacks[r]});
    if (base.rows[r].kind == RowKind::kLdp) {
      certificate.min_ldp_slack = std::min(certificate.min_ldp_slack, slacks[r]);
    }
  }
  for (int i = 0; i < k; ++i) certificate.utility += q.at(i, i) * dist.group_prob(i);

  const double objective = ComputeDelta(dist, q);
  return {std::move(q), config.epsilon, config.zeta, objective,
          std::move(certificate)};
}

double MinAchievableError(const JointDistribution& dist, double epsilon) {
  SolverConfig config;
  config.epsilon = epsilon;
  config.zeta = 1.0;
  LinearConstraintSystem system = AssembleConstraints(dist, config);
  system.rows.pop_back();  // the utility row
  const int k = dist.k();
  std::vector<double> cost(static_cast<size_t>(k) * (k - 1));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (j != i) cost[OffDiagonalIndex(k, i, j)] = dist.group_prob(i);
    }
  }
  LpSolution solution = MinimizeLinear(system, cost);
  if (solution.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kNumericalFailure,
                "minimum-error program did not reach an optimum");
  }
  return std::max(0.0, solution.objective);
}

namespace {

constexpr double kGridSlack = 1e-12;
// Points per axis in refinement passes.
constexpr int kRefinePoints = 9;
constexpr int kRefineStarts = 6;
constexpr double kRefineShrink = 0.6;

// Exhaustive search over a box grid, one matrix row at a time.
class GridSearch {
 public:
  GridSearch(const JointDistribution& dist, const SolverConfig& config)
      : dist_(dist),
        k_(dist.k()),
        bound_(std::exp(config.epsilon)),
        min_utility_(1.0 - config.zeta),
        q_(static_cast<size_t>(k_) * k_, 0.0) {}

  // axes[d] lists the grid values of off-diagonal unknown d.
  void Run(const std::vector<std::vector<double>>& axes) {
    rows_.assign(k_, {});
    for (int i = 0; i < k_; ++i) rows_[i] = RowCandidates(i, axes);
    Assign(0);
  }

  bool found() const { return found_; }
  double best_objective() const { return best_objective_; }
  const std::vector<double>& best() const { return best_; }
  long long evaluated() const { return evaluated_; }
  void KeepTop(int count) { keep_ = count; }
  const std::vector<std::pair<double, std::vector<double>>>& top() const { return top_; }

 private:
  // Full rows (k entries) of row i whose off-diagonals lie on the grid and
  // that satisfy the row-local constraints: row mass, q_ii >= q_ij, and the
  // lower bound q_ij >= e^-eps / k implied by q_jj >= 1/k together with LDP.
  std::vector<std::vector<double>> RowCandidates(
      int i, const std::vector<std::vector<double>>& axes) const {
    std::vector<int> others;
    for (int j = 0; j < k_; ++j) {
      if (j != i) others.push_back(j);
    }
    const double floor = 1.0 / (bound_ * k_) - kGridSlack;
    std::vector<std::vector<double>> out;
    std::vector<double> row(k_, 0.0);
    std::function<void(size_t, double)> expand = [&](size_t pos, double used) {
      if (pos == others.size()) {
        const double diag = 1.0 - used;
        if (diag < -kGridSlack) return;
        for (int j : others) {
          if (row[j] > diag + kGridSlack) return;
        }
        row[i] = std::max(diag, 0.0);
        out.push_back(row);
        return;
      }
      const int j = others[pos];
      for (double v : axes[OffDiagonalIndex(k_, i, j)]) {
        if (v < floor) continue;
        if (used + v > 1.0 + kGridSlack) break;
        row[j] = v;
        expand(pos + 1, used + v);
      }
    };
    expand(0, 0.0);
    return out;
  }

  // Constraints coupling row r with the rows already placed (< r).
  bool CompatibleWithPlaced(int r) const {
    for (int i = 0; i < r; ++i) {
      // Column truthfulness q_jj >= q_ij and reduced LDP q_jj <= e^eps q_ij
      // for the pairs (i, r) and (r, i).
      if (!PairOk(i, r) || !PairOk(r, i)) return false;
    }
    return true;
  }

  bool PairOk(int i, int j) const {
    const double lie = q_[static_cast<size_t>(i) * k_ + j];
    const double truth = q_[static_cast<size_t>(j) * k_ + j];
    return truth + kGridSlack >= lie && truth <= bound_ * lie + kGridSlack;
  }

  void Assign(int r) {
    if (r == k_) {
      Evaluate();
      return;
    }
    for (const std::vector<double>& row : rows_[r]) {
      std::copy(row.begin(), row.end(), q_.begin() + static_cast<size_t>(r) * k_);
      if (CompatibleWithPlaced(r)) Assign(r + 1);
    }
  }

  void Evaluate() {
    ++evaluated_;
    double utility = 0.0;
    for (int i = 0; i < k_; ++i) {
      utility += q_[static_cast<size_t>(i) * k_ + i] * dist_.group_prob(i);
    }
    if (utility + kGridSlack < min_utility_) return;
    double worst = 0.0;
    for (int a = 0; a < k_; ++a) {
      double mass = 0.0;
      double positive = 0.0;
      for (int j = 0; j < k_; ++j) {
        const double joint = dist_.group_prob(j) * q_[static_cast<size_t>(j) * k_ + a];
        mass += joint;
        positive += dist_.pos_rate(j) * joint;
      }
      if (mass <= 0.0) return;
      worst = std::max(worst,
                       std::abs(positive / (dist_.pos_marginal() * mass) - 1.0));
    }
    if (!found_ || worst < best_objective_) {
      found_ = true;
      best_objective_ = worst;
      best_ = q_;
    }
    if (keep_ > 0) {
      if (static_cast<int>(top_.size()) < keep_ || worst < top_.back().first) {
        top_.insert(std::upper_bound(top_.begin(), top_.end(), worst,
                                     [](double v, const auto& e) { return v < e.first; }),
                    {worst, q_});
        if (static_cast<int>(top_.size()) > keep_) top_.pop_back();
      }
    }
  }

  const JointDistribution& dist_;
  int k_;
  double bound_;
  double min_utility_;
  std::vector<double> q_;
  std::vector<std::vector<std::vector<double>>> rows_;
  bool found_ = false;
  double best_objective_ = std::numeric_limits<double>::infinity();
  std::vector<double> best_;
  long long evaluated_ = 0;
  int keep_ = 0;
  std::vector<std::pair<double, std::vector<double>>> top_;
};

std::vector<double> LinearAxis(double lo, double hi, int points) {
  std::vector<double> axis(points);
  for (int s = 0; s < points; ++s) {
    axis[s] = points == 1 ? lo : lo + (hi - lo) * s / (points - 1);
  }
  axis.front() = lo;
  axis.back() = hi;
  return axis;
}

}  // namespace

BruteForceResult BruteForceOptK(const JointDistribution& dist,
                                const SolverConfig& config, int grid_steps,
                                int refine_rounds) {
  config.Validate();
  const int k = dist.k();
  if (k > 3 || grid_steps > 25) {
    throw Error(ErrorCode::kTooLarge,
                "grid oracle supports k <= 3 and grid_steps <= 25 (got k = " +
                    std::to_string(k) + ", grid_steps = " +
                    std::to_string(grid_steps) + ")");
  }
  if (grid_steps < 2 || refine_rounds < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "grid oracle needs grid_steps >= 2 and refine_rounds >= 0");
  }
  const int dims = k * (k - 1);
  GridSearch search(dist, config);
  search.KeepTop(kRefineStarts);
  std::vector<std::vector<double>> axes(dims, LinearAxis(0.0, 1.0, grid_steps));
  search.Run(axes);
  long long evaluated = search.evaluated();
  if (!search.found()) {
    throw Error(ErrorCode::kInfeasibleBudget, "no grid point is feasible");
  }
  std::vector<double> best = search.best();
  double best_objective = search.best_objective();

  // Refinement restarts from each of the best coarse points, so a start
  // that stalls in a thin corner of the feasible region does not decide
  // the answer alone.
  const int starts = refine_rounds > 0 ? static_cast<int>(search.top().size()) : 0;
  for (int start = 0; start < starts; ++start) {
    std::vector<double> incumbent = search.top()[start].second;
    double incumbent_objective = search.top()[start].first;
    double half_width = 1.0 / (grid_steps - 1);
    for (int round = 0; round < refine_rounds; ++round) {
      const std::vector<double> center = OffDiagonalsOf(MechanismMatrix(k, incumbent));
      for (int d = 0; d < dims; ++d) {
        const double lo = std::max(0.0, center[d] - half_width);
        const double hi = std::min(1.0, center[d] + half_width);
        axes[d] = LinearAxis(lo, hi, kRefinePoints);
        axes[d].push_back(center[d]);
        std::sort(axes[d].begin(), axes[d].end());
        axes[d].erase(std::unique(axes[d].begin(), axes[d].end()), axes[d].end());
      }
      GridSearch local(dist, config);
      local.Run(axes);
      evaluated += local.evaluated();
      // The incumbent is on the refined grid, so a pass never regresses.
      if (local.found() && local.best_objective() < incumbent_objective) {
        incumbent = local.best();
        incumbent_objective = local.best_objective();
      }
      half_width *= kRefineShrink;
    }
    if (incumbent_objective < best_objective) {
      best = std::move(incumbent);
      best_objective = incumbent_objective;
    }
  }
  return {MechanismMatrix(k, std::move(best)), best_objective, evaluated};
}

}  // namespace fairldp
