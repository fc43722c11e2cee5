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

#ifndef FAIRLDP_OPT_BINARY_H_
#define FAIRLDP_OPT_BINARY_H_

#include "fairldp/distribution.h"
#include "fairldp/mechanisms.h"

namespace fairldp {

// Which closed-form branch produced the optimum. The comparison is between
// the group probabilities Pr(A = 0) and Pr(A = 1) after groups have been
// labeled so that Pr(Y=1|A=0) <= Pr(Y=1|A=1).
enum class BinaryCase { kP0LessP1, kP1LessP0, kTie };

const char* BinaryCaseName(BinaryCase c);

struct BinaryDesignResult {
  BinaryMechanism mechanism;
  double epsilon;
  // DeltaPrime(induced) / DeltaPrime(original) at the optimum.
  double objective;
  BinaryCase case_taken;
  // True when the input had Pr(Y=1|A=0) > Pr(Y=1|A=1) and groups were
  // relabeled internally. `mechanism` is always expressed in the caller's
  // labeling.
  bool groups_swapped;
};

// Unfairness shrink factor of the binary mechanism (p, q):
//
//   p0 p1 (pq - (1-p)(1-q)) / ((p0 (1-p) + p1 q) (p0 p + p1 (1-q)))
//
// which equals DeltaPrime(induced) / DeltaPrime(dist) for p, q in [1/2, 1].
// Throws kNotBinary, kZeroBaseUnfairness when pos_rates are equal, and
// kInvalidArgument when (p, q) leaves [1/2, 1]^2 or a denominator factor
// vanishes.
double ObjectiveRatio(const JointDistribution& dist, double p, double q);

// Closed-form optimal eps-LDP mechanism for a binary sensitive attribute:
//   p0 < p1: (p*, q*) = (1 - e^-eps / 2, 1/2)
//   p1 < p0: (p*, q*) = (1/2, 1 - e^-eps / 2)
// Ties (|p0 - p1| <= 1e-12) take the first branch; both branches have the
// same objective. When the base unfairness is zero the shrink factor is still
// reported (the simplified form does not involve the positive rates).
BinaryDesignResult OptBinary(const JointDistribution& dist, double epsilon);

struct BoundaryOracleResult {
  double p;
  double q;
  double objective;
  // Best objective found on each privacy-boundary curve:
  //   curve_p: q = e^eps (1 - p), curve_q: p = e^eps (1 - q).
  double best_on_curve_p;
  double best_on_curve_q;
};

// Verification oracle: evaluates ObjectiveRatio on grid_n evenly spaced points
// of each privacy-boundary line, clipped to the feasible region
// {1/2 <= p, q <= 1, p <= e^eps (1-q), q <= e^eps (1-p)}, and returns the
// argmin with a lexicographic (p, q) tie-break. grid_n must be >= 1000.
BoundaryOracleResult BoundaryOracle(const JointDistribution& dist,
                                    double epsilon, int grid_n,
                                    int threads = 1);

}  // namespace fairldp

#endif  // FAIRLDP_OPT_BINARY_H_
