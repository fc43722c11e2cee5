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
#include <string>

#include "fairldp/error.h"

namespace fairldp {

JointDistribution::JointDistribution(std::vector<double> group_probs,
                                     std::vector<double> pos_rates,
                                     double pos_marginal)
    : group_probs_(std::move(group_probs)),
      pos_rates_(std::move(pos_rates)),
      pos_marginal_(pos_marginal) {
  if (group_probs_.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need k >= 2 sensitive values");
  }
  if (pos_rates_.size() != group_probs_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "group_probs and pos_rates differ in length");
  }
  double total = 0.0;
  double marginal = 0.0;
  for (size_t i = 0; i < group_probs_.size(); ++i) {
    const double p = group_probs_[i];
    const double r = pos_rates_[i];
    if (!(p > 0.0) || !(p <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "group_probs[" + std::to_string(i) + "] = " +
                      std::to_string(p) + " is not in (0, 1]");
    }
    if (!(r >= 0.0) || !(r <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "pos_rates[" + std::to_string(i) + "] = " +
                      std::to_string(r) + " is not in [0, 1]");
    }
    total += p;
    marginal += p * r;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw Error(ErrorCode::kInvalidArgument,
                "group_probs sum to " + std::to_string(total));
  }
  if (!(std::abs(marginal - pos_marginal_) <= kProbabilityTolerance)) {
    throw Error(ErrorCode::kInvalidArgument,
                "pos_marginal " + std::to_string(pos_marginal_) +
                    " disagrees with sum p_i * p_{1|i} = " +
                    std::to_string(marginal));
  }
}

JointDistribution JointDistribution::FromRates(std::vector<double> group_probs,
                                               std::vector<double> pos_rates) {
  double marginal = 0.0;
  for (size_t i = 0; i < group_probs.size() && i < pos_rates.size(); ++i) {
    marginal += group_probs[i] * pos_rates[i];
  }
  return JointDistribution(std::move(group_probs), std::move(pos_rates),
                           marginal);
}

JointDistribution EstimateDistribution(const TabularDataset& dataset) {
  if (dataset.encoding != SensitiveEncoding::kIndex) {
    throw Error(ErrorCode::kUndefinedMetric,
                "data unfairness is not defined over subset-valued reports");
  }
  dataset.Validate();
  const int k = dataset.k();
  const size_t n = dataset.size();
  std::vector<size_t> count(k, 0);
  std::vector<size_t> positives(k, 0);
  size_t total_positive = 0;
  for (size_t r = 0; r < n; ++r) {
    const int a = dataset.sensitive[r];
    ++count[a];
    positives[a] += dataset.labels[r];
    total_positive += dataset.labels[r];
  }
  std::vector<double> group_probs(k);
  std::vector<double> pos_rates(k);
  for (int a = 0; a < k; ++a) {
    if (count[a] == 0) {
      throw Error(ErrorCode::kEmptyGroup,
                  "sensitive value " + std::to_string(a) + " ('" +
                      dataset.sensitive_values[a] + "') has no records");
    }
    group_probs[a] = static_cast<double>(count[a]) / static_cast<double>(n);
    pos_rates[a] = static_cast<double>(positives[a]) / static_cast<double>(count[a]);
  }
  return JointDistribution(std::move(group_probs), std::move(pos_rates),
                           static_cast<double>(total_positive) /
                               static_cast<double>(n));
}

double Delta(const JointDistribution& dist) {
  const double marginal = dist.pos_marginal();
  if (!(marginal > 0.0)) {
    throw Error(ErrorCode::kZeroPositiveRate, "Pr(Y = 1) is zero");
  }
  double worst = 0.0;
  for (double rate : dist.pos_rates()) {
    worst = std::max(worst, std::abs(rate / marginal - 1.0));
  }
  return worst;
}

double DeltaPrime(const JointDistribution& dist) {
  auto [lo, hi] = std::minmax_element(dist.pos_rates().begin(),
                                      dist.pos_rates().end());
  return *hi - *lo;
}

EquivalenceConstants EquivalenceBounds(const JointDistribution& dist) {
  const double marginal = dist.pos_marginal();
  if (!(marginal > 0.0)) {
    throw Error(ErrorCode::kZeroPositiveRate, "Pr(Y = 1) is zero");
  }
  return {1.0 / marginal, 2.0 * marginal};
}

}  // namespace fairldp
