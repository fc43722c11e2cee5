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

#include <cmath>

#include "fairldp/error.h"
#include "fairldp/json_io.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fairldp {
namespace {

// Unsimplified objective: Delta'(induced) / Delta'(original).
double QuotientOfDifferences(const JointDistribution& d, double p, double q) {
  return DeltaPrime(InducedDistribution(d, MatrixOfBinary({p, q}))) / DeltaPrime(d);
}

TEST(ObjectiveRatioTest, Examples) {
  const JointDistribution d = JointDistribution::FromRates({0.5, 0.5}, {0.3, 0.7});
  EXPECT_NEAR(ObjectiveRatio(d, 1.0, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(ObjectiveRatio(d, 0.5, 0.5), 0.0, 1e-15);
  EXPECT_NEAR(ObjectiveRatio(d, 0.75, 0.5), 0.0625 / (0.375 * 0.625), 1e-15);
  EXPECT_NEAR(ObjectiveRatio(d, 0.75, 0.5), QuotientOfDifferences(d, 0.75, 0.5), 1e-10);
}

TEST(ObjectiveRatioTest, AgreesWithInducedDistributionPath) {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const JointDistribution d = testing::RandomDistribution(rng, 2);
    if (DeltaPrime(d) < 1e-3) continue;
    const double p = 0.5 + 0.5 * rng.NextUnit();
    const double q = 0.5 + 0.5 * rng.NextUnit();
    EXPECT_NEAR(ObjectiveRatio(d, p, q), QuotientOfDifferences(d, p, q), 1e-10);
  }
}

TEST(ObjectiveRatioTest, Errors) {
  try {
    ObjectiveRatio(JointDistribution::FromRates({0.4, 0.6}, {0.5, 0.5}), 0.7, 0.7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroBaseUnfairness);
  }
  try {
    ObjectiveRatio(JointDistribution::FromRates({0.4, 0.3, 0.3}, {0.1, 0.5, 0.9}), 0.7, 0.7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotBinary);
  }
  EXPECT_THROW(
      ObjectiveRatio(JointDistribution::FromRates({0.4, 0.6}, {0.2, 0.5}), 0.4, 0.7), Error);
}

TEST(OptBinaryTest, ClosedFormBranches) {
  const double eps = std::log(2.0);
  const BinaryDesignResult first =
      OptBinary(JointDistribution::FromRates({0.3, 0.7}, {0.2, 0.6}), eps);
  EXPECT_NEAR(first.mechanism.p, 0.75, 1e-15);
  EXPECT_NEAR(first.mechanism.q, 0.5, 1e-15);
  EXPECT_EQ(first.case_taken, BinaryCase::kP0LessP1);
  const BinaryDesignResult second =
      OptBinary(JointDistribution::FromRates({0.7, 0.3}, {0.2, 0.6}), eps);
  EXPECT_NEAR(second.mechanism.p, 0.5, 1e-15);
  EXPECT_NEAR(second.mechanism.q, 0.75, 1e-15);
  EXPECT_EQ(second.case_taken, BinaryCase::kP1LessP0);
}

TEST(OptBinaryTest, RelabelsWhenRatesDecrease) {
  // Group 0 has the larger positive rate: the solver relabels internally
  // and maps back, which leaves the branch on group probabilities intact.
  const BinaryDesignResult r =
      OptBinary(JointDistribution::FromRates({0.3, 0.7}, {0.6, 0.2}), std::log(2.0));
  EXPECT_TRUE(r.groups_swapped);
  EXPECT_NEAR(r.mechanism.p, 0.75, 1e-15);
  EXPECT_NEAR(r.mechanism.q, 0.5, 1e-15);
}

TEST(OptBinaryTest, TieAndLimits) {
  const JointDistribution tie = JointDistribution::FromRates({0.5, 0.5}, {0.6, 0.2});
  const BinaryDesignResult r = OptBinary(tie, std::log(2.0));
  EXPECT_EQ(r.case_taken, BinaryCase::kTie);
  EXPECT_NEAR(r.mechanism.p, 0.75, 1e-15);
  EXPECT_NEAR(r.mechanism.q, 0.5, 1e-15);
  EXPECT_NEAR(ObjectiveRatio(tie, 0.5, 0.75), r.objective, 1e-15);

  const BinaryDesignResult tiny =
      OptBinary(JointDistribution::FromRates({0.3, 0.7}, {0.2, 0.6}), 1e-9);
  EXPECT_NEAR(tiny.mechanism.p, 0.5, 1e-9);
  EXPECT_NEAR(tiny.objective, 0.0, 1e-8);
}

TEST(OptBinaryTest, Errors) {
  try {
    OptBinary(JointDistribution::FromRates({0.3, 0.7}, {0.2, 0.6}), 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidEpsilon);
  }
  try {
    OptBinary(JointDistribution::FromRates({0.3, 0.3, 0.4}, {0.2, 0.6, 0.1}), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotBinary);
  }
}

TEST(OptBinaryTest, Invariants) {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const JointDistribution d = testing::RandomDistribution(rng, 2);
    if (DeltaPrime(d) < 1e-6) continue;
    const double eps = 5.0 * (1.0 - rng.NextUnit());
    const double e = std::exp(eps);
    const BinaryDesignResult r = OptBinary(d, eps);
    const double p = r.mechanism.p;
    const double q = r.mechanism.q;
    EXPECT_LE(p, e * (1.0 - q) + 1e-9);
    EXPECT_LE(q, e * (1.0 - p) + 1e-9);
    EXPECT_GE(r.objective, 0.0);
    EXPECT_LE(r.objective, 1.0);
    EXPECT_NEAR(PrivacyLevel(MatrixOfBinary(r.mechanism)), eps, 1e-9);
    EXPECT_NEAR(r.objective, ObjectiveRatio(d, p, q), 1e-15);
    const BinaryMechanism rr = RrMechanism(eps);
    EXPECT_LE(r.objective, ObjectiveRatio(d, rr.p, rr.q) + 1e-12);
    // The chosen branch beats the mirrored one by direct comparison.
    const double t = 1.0 - std::exp(-eps) / 2.0;
    const double case1 = ObjectiveRatio(d, t, 0.5);
    const double case2 = ObjectiveRatio(d, 0.5, t);
    EXPECT_NEAR(r.objective, std::min(case1, case2), 1e-15);
    EXPECT_EQ(d.group_prob(1) <= d.group_prob(0), case2 <= case1 + 1e-15);
    // Ordering of the induced rates follows the original ordering.
    const JointDistribution z = InducedDistribution(d, MatrixOfBinary(r.mechanism));
    EXPECT_EQ(d.pos_rate(0) <= d.pos_rate(1), z.pos_rate(0) <= z.pos_rate(1) + 1e-15);
  }
}

TEST(BoundaryOracleTest, Examples) {
  const JointDistribution d = JointDistribution::FromRates({0.3, 0.7}, {0.2, 0.6});
  const double eps = std::log(2.0);
  const BoundaryOracleResult o = BoundaryOracle(d, eps, 100000);
  EXPECT_NEAR(o.p, 0.75, 1e-4);
  EXPECT_NEAR(o.q, 0.5, 1e-4);
  EXPECT_NEAR(o.objective, OptBinary(d, eps).objective, 1e-6);

  const BoundaryOracleResult tie =
      BoundaryOracle(JointDistribution::FromRates({0.5, 0.5}, {0.2, 0.6}), 1.0, 100000);
  EXPECT_NEAR(tie.best_on_curve_p, tie.best_on_curve_q, 1e-8);

  const BoundaryOracleResult big =
      BoundaryOracle(JointDistribution::FromRates({0.9, 0.1}, {0.3, 0.5}), 5.0, 100000);
  EXPECT_NEAR(big.p, 0.5, 1e-4);
  EXPECT_NEAR(big.q, 1.0 - std::exp(-5.0) / 2.0, 1e-4);
}

TEST(BoundaryOracleTest, DeterministicAcrossThreads) {
  const JointDistribution d = JointDistribution::FromRates({0.45, 0.55}, {0.2, 0.9});
  const BoundaryOracleResult a = BoundaryOracle(d, 0.9, 5000, 1);
  const BoundaryOracleResult b = BoundaryOracle(d, 0.9, 5000, 4);
  EXPECT_EQ(a.p, b.p);
  EXPECT_EQ(a.q, b.q);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(BoundaryOracleTest, Errors) {
  const JointDistribution d = JointDistribution::FromRates({0.3, 0.7}, {0.2, 0.6});
  EXPECT_THROW(BoundaryOracle(d, 1.0, 999), Error);
  EXPECT_THROW(BoundaryOracle(d, -1.0, 1000), Error);
  EXPECT_THROW(BoundaryOracle(JointDistribution::FromRates({0.3, 0.7}, {0.4, 0.4}), 1.0, 1000),
               Error);
}

// Interior points use less than the full budget, so each is compared with
// the optimum at its own privacy level.
TEST(BoundaryOracleTest, NoInteriorPointBeatsTheBoundaryAtItsLevel) {
  SplitMix64 rng(1);
  int checked = 0;
  while (checked < 10000) {
    const JointDistribution d = testing::RandomDistribution(rng, 2);
    if (DeltaPrime(d) < 1e-3) continue;
    const double p = 0.5 + 0.5 * rng.NextUnit();
    const double q = 0.5 + 0.5 * rng.NextUnit();
    if (p + q <= 1.0 + 1e-6 || p == 1.0 || q == 1.0) continue;
    const double level = PrivacyLevel(MatrixOfBinary({p, q}));
    ++checked;
    ASSERT_GE(ObjectiveRatio(d, p, q), OptBinary(d, level).objective - 1e-12)
        << "p=" << p << " q=" << q;
  }
}

TEST(BinaryResultJsonTest, Fields) {
  const BinaryDesignResult r =
      OptBinary(JointDistribution::FromRates({0.3, 0.7}, {0.2, 0.6}), std::log(2.0));
  const Json j = BinaryResultToJson(r);
  EXPECT_EQ(j.dump(), R"({"p":0.75,"q":0.5,"epsilon":0.6931471805599453,)"
                      R"("objective":)" + Json(r.objective).dump() +
                      R"(,"case":"P0LessP1"})");
}

}  // namespace
}  // namespace fairldp
