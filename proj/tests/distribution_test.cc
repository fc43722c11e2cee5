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

#include "fairldp/distribution.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "fairldp/error.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fairldp {
namespace {

TabularDataset Records(std::vector<int> groups, std::vector<int> labels, int k) {
  TabularDataset d;
  d.sensitive = std::move(groups);
  d.labels = std::move(labels);
  for (int a = 0; a < k; ++a) d.sensitive_values.push_back(std::to_string(a));
  return d;
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(JointDistributionTest, RejectsInvalidInputs) {
  EXPECT_EQ(CodeOf([] { JointDistribution({1.0}, {0.5}, 0.5); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { JointDistribution({0.5, 0.6}, {0.5, 0.5}, 0.5); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { JointDistribution({1.0, 0.0}, {0.5, 0.5}, 0.5); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { JointDistribution({0.5, 0.5}, {1.2, 0.5}, 0.85); }),
            ErrorCode::kInvalidArgument);
  // Marginal inconsistent with the law of total probability.
  EXPECT_EQ(CodeOf([] { JointDistribution({0.5, 0.5}, {0.2, 0.6}, 0.5); }),
            ErrorCode::kInvalidArgument);
  EXPECT_NO_THROW(JointDistribution({0.5, 0.5}, {0.2, 0.6}, 0.4 + 5e-10));
}

TEST(EstimateDistributionTest, CountsFourRecords) {
  const JointDistribution d =
      EstimateDistribution(Records({0, 0, 1, 1}, {1, 0, 1, 1}, 2));
  EXPECT_EQ(d.k(), 2);
  EXPECT_DOUBLE_EQ(d.group_prob(0), 0.5);
  EXPECT_DOUBLE_EQ(d.group_prob(1), 0.5);
  EXPECT_DOUBLE_EQ(d.pos_rate(0), 0.5);
  EXPECT_DOUBLE_EQ(d.pos_rate(1), 1.0);
  EXPECT_DOUBLE_EQ(d.pos_marginal(), 0.75);
}

TEST(EstimateDistributionTest, AllPositiveLabels) {
  const JointDistribution d =
      EstimateDistribution(Records({0, 1, 2, 1}, {1, 1, 1, 1}, 3));
  for (int a = 0; a < 3; ++a) EXPECT_DOUBLE_EQ(d.pos_rate(a), 1.0);
  EXPECT_DOUBLE_EQ(d.pos_marginal(), 1.0);
}

TEST(EstimateDistributionTest, RecoversGeneratingParameters) {
  testing::PlantedGenerator gen;
  gen.group_probs = {0.5, 0.3, 0.2};
  gen.pos_rates = {0.2, 0.5, 0.8};
  const JointDistribution d = EstimateDistribution(gen.Sample(1000, 11));
  for (int a = 0; a < 3; ++a) {
    EXPECT_NEAR(d.group_prob(a), gen.group_probs[a], 0.05);
    EXPECT_NEAR(d.pos_rate(a), gen.pos_rates[a], 0.05);
  }
}

TEST(EstimateDistributionTest, Errors) {
  EXPECT_EQ(CodeOf([] { EstimateDistribution(Records({0, 0}, {1, 0}, 2)); }),
            ErrorCode::kEmptyGroup);
  EXPECT_EQ(CodeOf([] { EstimateDistribution(Records({0, 1}, {1, 2}, 2)); }),
            ErrorCode::kNonBinaryLabel);
  TabularDataset subset = Records({0, 1}, {1, 0}, 2);
  subset.encoding = SensitiveEncoding::kSubsetIndicators;
  subset.sensitive.clear();
  subset.subset_indicators = {1, 0, 0, 1};
  EXPECT_EQ(CodeOf([&] { EstimateDistribution(subset); }), ErrorCode::kUndefinedMetric);
}

TEST(DeltaTest, Examples) {
  EXPECT_DOUBLE_EQ(Delta(JointDistribution::FromRates({0.3, 0.7}, {0.5, 0.5})), 0.0);
  EXPECT_NEAR(Delta(JointDistribution::FromRates({0.5, 0.5}, {0.2, 0.6})), 0.5, 1e-15);
  EXPECT_EQ(CodeOf([] { Delta(JointDistribution::FromRates({0.5, 0.5}, {0.0, 0.0})); }),
            ErrorCode::kZeroPositiveRate);
}

TEST(DeltaTest, MatchesLiteralDefinitionOnRandomK5) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const JointDistribution d = testing::RandomDistribution(rng, 5);
    double marginal = 0.0;
    for (int a = 0; a < 5; ++a) marginal += d.group_prob(a) * d.pos_rate(a);
    double expected = 0.0;
    for (int a = 0; a < 5; ++a) {
      expected = std::max(expected, std::abs(d.pos_rate(a) / marginal - 1.0));
    }
    EXPECT_NEAR(Delta(d), expected, 1e-12);
  }
}

TEST(DeltaPrimeTest, Examples) {
  EXPECT_NEAR(DeltaPrime(JointDistribution::FromRates({0.5, 0.5}, {0.2, 0.6})), 0.4, 1e-15);
  EXPECT_DOUBLE_EQ(DeltaPrime(JointDistribution::FromRates({0.2, 0.3, 0.5}, {0.4, 0.4, 0.4})),
                   0.0);
  EXPECT_NEAR(DeltaPrime(JointDistribution::FromRates({0.2, 0.3, 0.5}, {0.1, 0.5, 0.3})), 0.4,
              1e-15);
}

TEST(EquivalenceBoundsTest, Examples) {
  const EquivalenceConstants half =
      EquivalenceBounds(JointDistribution::FromRates({0.5, 0.5}, {0.25, 0.75}));
  EXPECT_DOUBLE_EQ(half.c1, 2.0);
  EXPECT_DOUBLE_EQ(half.c2, 1.0);
  const EquivalenceConstants quarter =
      EquivalenceBounds(JointDistribution::FromRates({0.5, 0.5}, {0.1, 0.4}));
  EXPECT_DOUBLE_EQ(quarter.c1, 4.0);
  EXPECT_DOUBLE_EQ(quarter.c2, 0.5);
}

TEST(DistributionPropertyTest, BoundsPermutationAndZeroSet) {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + static_cast<int>(rng.NextBelow(5));
    const JointDistribution d = testing::RandomDistribution(rng, k);
    const EquivalenceConstants c = EquivalenceBounds(d);
    EXPECT_LE(Delta(d), c.c1 * DeltaPrime(d) + 1e-12);
    EXPECT_LE(DeltaPrime(d), c.c2 * Delta(d) + 1e-12);

    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    std::vector<double> probs, rates;
    for (int i : perm) {
      probs.push_back(d.group_prob(i));
      rates.push_back(d.pos_rate(i));
    }
    const JointDistribution permuted(probs, rates, d.pos_marginal());
    EXPECT_NEAR(Delta(permuted), Delta(d), 1e-15);
    EXPECT_EQ(DeltaPrime(permuted), DeltaPrime(d));
  }
  const JointDistribution fair = JointDistribution::FromRates({0.2, 0.3, 0.5}, {0.6, 0.6, 0.6});
  EXPECT_NEAR(Delta(fair), 0.0, 1e-15);
  EXPECT_EQ(DeltaPrime(fair), 0.0);
}

}  // namespace
}  // namespace fairldp
