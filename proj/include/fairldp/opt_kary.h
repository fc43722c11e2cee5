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

#ifndef FAIRLDP_OPT_KARY_H_
#define FAIRLDP_OPT_KARY_H_

#include <span>
#include <vector>

#include "fairldp/distribution.h"
#include "fairldp/lp.h"
#include "fairldp/mechanisms.h"

namespace fairldp {

struct SolverConfig {
  double epsilon = 1.0;
  // Utility budget: the mechanism must report the true value with total
  // probability at least 1 - zeta.
  double zeta = 0.0;
  double objective_tol = 1e-6;
  double feasibility_tol = 1e-9;
  int max_bisection_iters = 60;

  // Throws kInvalidEpsilon or kInvalidArgument.
  void Validate() const;
};

// The unknowns of the k-ary program are the k(k-1) off-diagonal entries of
// Q in row-major order; diagonals are eliminated as q_ii = 1 - sum_{j!=i} q_ij.
int OffDiagonalIndex(int k, int i, int j);
MechanismMatrix MatrixFromOffDiagonals(int k, std::span<const double> x);
std::vector<double> OffDiagonalsOf(const MechanismMatrix& q);

// Static constraints of the program, in this canonical order:
//   2k(k-1) truthfulness rows   (for each i != j: q_ii >= q_ij, q_jj >= q_ij)
//   k(k-1)  reduced LDP rows    (for each i != j: q_jj - e^eps q_ij <= 0)
//   k       row-mass rows       (sum_{j!=i} q_ij <= 1)
//   k(k-1)  non-negativity rows (q_ij >= 0)
//   1       utility row         (sum_i q_ii p_i >= 1 - zeta)
LinearConstraintSystem AssembleConstraints(const JointDistribution& dist,
                                           const SolverConfig& config);

// 2k rows encoding |N_a / D_a - 1| <= t for every output a, with
// N_a = sum_j p_{1|j} p_j q_ja and D_a = Pr(Y=1) sum_j p_j q_ja:
//   N_a - (1 + t) D_a <= 0   and   (1 - t) D_a - N_a <= 0.
std::vector<LinearRow> FairnessRowsAt(const JointDistribution& dist, double t);

struct BisectionStep {
  double lo;
  double hi;
  double mid;
  bool feasible;
};

struct RowSlack {
  RowKind kind;
  double slack;
};

struct Certificate {
  int iterations = 0;
  // Bracket after the search: infeasible at `lo` (or lo = 0), feasible at `hi`.
  double lo = 0.0;
  double hi = 0.0;
  std::vector<BisectionStep> trace;
  // Slack of every static row at the returned mechanism, canonical order.
  std::vector<RowSlack> slacks;
  double min_ldp_slack = 0.0;
  double utility = 0.0;  // sum_i q_ii p_i
};

struct KaryDesignResult {
  MechanismMatrix q;
  double epsilon;
  double zeta;
  // Delta of the induced distribution, using the original Pr(Y = 1).
  double objective;
  Certificate certificate;
};

// Minimizes max_a |Pr(Y=1|Z=a) / Pr(Y=1) - 1| over the static constraints
// by bisection on the epigraph level t, each level being a linear
// feasibility problem. Among mechanisms at the final level, the one with the
// largest truthful-report probability is returned.
//
// Throws kInfeasibleBudget when the static system has no solution (zeta too
// small for this epsilon) and kNumericalFailure from the LP.
KaryDesignResult SolveOptK(const JointDistribution& dist,
                           const SolverConfig& config);

struct BruteForceResult {
  MechanismMatrix q;
  double objective;
  long long points_evaluated;
};

// Grid oracle, independent of the LP path. Each off-diagonal is gridded over
// [0, 1] with `grid_steps` points; infeasible points are filtered out and the
// best feasible point is kept. `refine_rounds` further passes re-grid a
// box around the incumbent (9 points per axis plus the incumbent itself),
// halving the box each round; 0 = plain exhaustive grid. Requires k <= 3 and grid_steps <= 25;
// throws kTooLarge otherwise, and kInfeasibleBudget when no grid point is
// feasible.
BruteForceResult BruteForceOptK(const JointDistribution& dist,
                                const SolverConfig& config, int grid_steps,
                                int refine_rounds = 0);

// Smallest error 1 - sum_i q_ii p_i over mechanisms meeting the LDP,
// stochasticity and truthfulness rows at epsilon. Any zeta below this makes
// the utility row infeasible.
double MinAchievableError(const JointDistribution& dist, double epsilon);

}  // namespace fairldp

#endif  // FAIRLDP_OPT_KARY_H_
