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

#ifndef FAIRLDP_LP_H_
#define FAIRLDP_LP_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fairldp {

enum class Relation { kLessEqual, kGreaterEqual };

// What a row of the mechanism-design program encodes. kOther is used for
// systems built outside the solver (tests, ad-hoc feasibility checks).
enum class RowKind {
  kTruthfulness,
  kLdp,
  kRowMass,
  kNonNegativity,
  kUtility,
  kFairness,
  kOther,
};

const char* RowKindName(RowKind kind);

// coefficients . x  (<= | >=)  bound
struct LinearRow {
  std::vector<double> coefficients;
  Relation relation;
  double bound;
  RowKind kind = RowKind::kOther;
};

struct LinearConstraintSystem {
  int num_vars = 0;
  std::vector<LinearRow> rows;

  // Throws kInvalidArgument on a length mismatch or non-finite entry.
  void Validate() const;
  // Largest amount by which x violates any row (0 when feasible).
  double MaxViolation(std::span<const double> x) const;
  // Signed slack of every row at x: bound - a.x for <=, a.x - bound for >=.
  std::vector<double> Slacks(std::span<const double> x) const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status;
  std::vector<double> x;  // empty unless kOptimal
  double objective = 0.0;
  int pivots = 0;
};

struct LpOptions {
  // A phase-one residual above this declares the system infeasible; a
  // returned point violates no row by more than this.
  double feasibility_tol = 1e-9;
  int max_pivots = 200000;
};

// Minimizes cost . x over the system with x unrestricted in sign (bounds must
// be expressed as rows). Dense two-phase simplex; Dantzig pricing with a
// switch to Bland's rule after a run of degenerate pivots, so it terminates
// and is deterministic. Throws kNumericalFailure when the pivot limit is hit
// or the final point fails the feasibility check.
LpSolution MinimizeLinear(const LinearConstraintSystem& system,
                          std::span<const double> cost,
                          const LpOptions& options = {});

// A point satisfying every row within options.feasibility_tol, or nullopt
// when the system is infeasible.
std::optional<std::vector<double>> LpFeasible(
    const LinearConstraintSystem& system, const LpOptions& options = {});

}  // namespace fairldp

#endif  // FAIRLDP_LP_H_
