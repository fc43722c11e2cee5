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

#include "fairldp/opt_binary.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include "fairldp/error.h"
#include "fairldp/parallel.h"

namespace fairldp {

const char* BinaryCaseName(BinaryCase c) {
  switch (c) {
    case BinaryCase::kP0LessP1: return "P0LessP1";
    case BinaryCase::kP1LessP0: return "P1LessP0";
    case BinaryCase::kTie: return "Tie";
  }
  return "Unknown";
}

namespace {

constexpr double kTieTolerance = 1e-12;

void CheckBinary(const JointDistribution& dist) {
  if (dist.k() != 2) {
    throw Error(ErrorCode::kNotBinary,
                "binary design needs k = 2, got k = " + std::to_string(dist.k()));
  }
}

double ShrinkFactor(double p0, double p1, double p, double q) {
  const double numerator = p0 * p1 * (p * q - (1.0 - p) * (1.0 - q));
  const double z1_mass = p0 * (1.0 - p) + p1 * q;
  const double z0_mass = p0 * p + p1 * (1.0 - q);
  if (!(z1_mass > 0.0) || !(z0_mass > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "mechanism leaves an output value with zero probability");
  }
  return numerator / (z1_mass * z0_mass);
}

}  // namespace

double ObjectiveRatio(const JointDistribution& dist, double p, double q) {
  CheckBinary(dist);
  if (DeltaPrime(dist) == 0.0) {
    throw Error(ErrorCode::kZeroBaseUnfairness,
                "positive rates are equal; the unfairness ratio is undefined");
  }
  BinaryMechanism{p, q}.Validate();
  return ShrinkFactor(dist.group_prob(0), dist.group_prob(1), p, q);
}

BinaryDesignResult OptBinary(const JointDistribution& dist, double epsilon) {
  CheckBinary(dist);
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidEpsilon,
                "epsilon must be positive, got " + std::to_string(epsilon));
  }
  // Relabel so that Pr(Y=1|A=0) <= Pr(Y=1|A=1).
  const bool swapped = dist.pos_rate(0) > dist.pos_rate(1);
  const double p0 = swapped ? dist.group_prob(1) : dist.group_prob(0);
  const double p1 = swapped ? dist.group_prob(0) : dist.group_prob(1);

  const double truthful = 1.0 - 0.5 * std::exp(-epsilon);
  BinaryCase case_taken;
  BinaryMechanism normalized;
  if (std::abs(p0 - p1) <= kTieTolerance) {
    case_taken = BinaryCase::kTie;
    normalized = {truthful, 0.5};
  } else if (p0 < p1) {
    case_taken = BinaryCase::kP0LessP1;
    normalized = {truthful, 0.5};
  } else {
    case_taken = BinaryCase::kP1LessP0;
    normalized = {0.5, truthful};
  }
  // Both branches are optimal on a tie; report the first in input labels.
  const BinaryMechanism mechanism =
      swapped && case_taken != BinaryCase::kTie
          ? BinaryMechanism{normalized.q, normalized.p}
          : normalized;
  const double objective = ShrinkFactor(dist.group_prob(0), dist.group_prob(1),
                                        mechanism.p, mechanism.q);
  return {mechanism, epsilon, objective, case_taken, swapped};
}

namespace {

struct Segment {
  double lo;
  double hi;
  bool empty;
};

// Points (t, alpha + beta t) of a line, clipped by constraints
// c0 + c1 * t + c2 * s <= 0 where s is the dependent coordinate.
Segment ClipLine(double alpha, double beta,
                 const std::vector<std::tuple<double, double, double>>& rows) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& [c0, c1, c2] : rows) {
    const double constant = c0 + c2 * alpha;
    const double slope = c1 + c2 * beta;
    if (slope == 0.0) {
      if (constant > 0.0) return {0.0, 0.0, true};
      continue;
    }
    const double root = -constant / slope;
    if (slope > 0.0) {
      hi = std::min(hi, root);
    } else {
      lo = std::max(lo, root);
    }
  }
  return {lo, hi, !(lo <= hi)};
}

struct Candidate {
  double objective;
  double p;
  double q;

  bool operator<(const Candidate& other) const {
    return std::tie(objective, p, q) <
           std::tie(other.objective, other.p, other.q);
  }
};

// Scans the line where the "free" coordinate is t and the other coordinate
// sits on its privacy boundary e^eps (1 - t). `t_is_p` selects which of
// (p, q) is the free coordinate.
Candidate ScanCurve(const JointDistribution& dist, double epsilon, int grid_n,
                    bool t_is_p, int threads) {
  const double e = std::exp(epsilon);
  // Feasible region in (t, s) coordinates; symmetric in p and q.
  //   1/2 <= t <= 1, 1/2 <= s <= 1, t <= e (1 - s), s <= e (1 - t)
  const std::vector<std::tuple<double, double, double>> rows = {
      {0.5, -1.0, 0.0},  {-1.0, 1.0, 0.0},  {0.5, 0.0, -1.0},
      {-1.0, 0.0, 1.0},  {-e, 1.0, e},      {-e, e, 1.0},
  };
  const Segment segment = ClipLine(e, -e, rows);
  if (segment.empty) {
    return {std::numeric_limits<double>::infinity(), 0.0, 0.0};
  }
  std::vector<Candidate> values(grid_n);
  ParallelFor(static_cast<size_t>(grid_n), threads, [&](size_t i) {
    const double t =
        grid_n == 1 ? segment.lo
                    : segment.lo + (segment.hi - segment.lo) *
                                       (static_cast<double>(i) / (grid_n - 1));
    const double s = std::clamp(e * (1.0 - t), 0.5, 1.0);
    const double tc = std::clamp(t, 0.5, 1.0);
    const double p = t_is_p ? tc : s;
    const double q = t_is_p ? s : tc;
    values[i] = {ObjectiveRatio(dist, p, q), p, q};
  });
  return *std::min_element(values.begin(), values.end());
}

}  // namespace

BoundaryOracleResult BoundaryOracle(const JointDistribution& dist,
                                    double epsilon, int grid_n, int threads) {
  CheckBinary(dist);
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidEpsilon,
                "epsilon must be positive, got " + std::to_string(epsilon));
  }
  if (grid_n < 1000) {
    throw Error(ErrorCode::kInvalidArgument,
                "boundary oracle needs grid_n >= 1000");
  }
  if (DeltaPrime(dist) == 0.0) {
    throw Error(ErrorCode::kZeroBaseUnfairness,
                "positive rates are equal; the unfairness ratio is undefined");
  }
  const Candidate on_p = ScanCurve(dist, epsilon, grid_n, true, threads);
  const Candidate on_q = ScanCurve(dist, epsilon, grid_n, false, threads);
  const Candidate best = std::min(on_p, on_q);
  return {best.p, best.q, best.objective, on_p.objective, on_q.objective};
}

}  // namespace fairldp
