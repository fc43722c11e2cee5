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

#ifndef FAIRLDP_DISTRIBUTION_H_
#define FAIRLDP_DISTRIBUTION_H_

#include <span>
#include <vector>

#include "fairldp/dataset.h"

namespace fairldp {

// Summary of the joint law of (A, Y) that every unfairness formula consumes:
// group probabilities Pr(A = i), per-group positive rates Pr(Y = 1 | A = i)
// and the marginal Pr(Y = 1).
//
// The marginal is stored rather than recomputed so that a perturbed
// distribution can carry the original Pr(Y = 1). Construction validates it
// against the law of total probability.
class JointDistribution {
 public:
  // Throws kInvalidArgument unless k >= 2, group_probs are strictly positive
  // and sum to 1 (within 1e-9), pos_rates lie in [0, 1], and pos_marginal
  // equals sum_i group_probs[i] * pos_rates[i] within 1e-9.
  JointDistribution(std::vector<double> group_probs,
                    std::vector<double> pos_rates, double pos_marginal);

  // Same, with the marginal computed from the other two.
  static JointDistribution FromRates(std::vector<double> group_probs,
                                     std::vector<double> pos_rates);

  int k() const { return static_cast<int>(group_probs_.size()); }
  std::span<const double> group_probs() const { return group_probs_; }
  std::span<const double> pos_rates() const { return pos_rates_; }
  double group_prob(int i) const { return group_probs_[i]; }
  double pos_rate(int i) const { return pos_rates_[i]; }
  double pos_marginal() const { return pos_marginal_; }

 private:
  std::vector<double> group_probs_;
  std::vector<double> pos_rates_;
  double pos_marginal_;
};

inline constexpr double kProbabilityTolerance = 1e-9;

// Empirical plug-in estimate. Throws kEmptyGroup if a sensitive value has no
// records, kNonBinaryLabel for labels outside {0, 1}, and kUndefinedMetric
// for subset-encoded (subset selection) datasets.
JointDistribution EstimateDistribution(const TabularDataset& dataset);

// max_a |Pr(Y=1|A=a) / Pr(Y=1) - 1|. Throws kZeroPositiveRate when
// Pr(Y=1) = 0.
double Delta(const JointDistribution& dist);

// max_{a,a'} |Pr(Y=1|A=a) - Pr(Y=1|A=a')|.
double DeltaPrime(const JointDistribution& dist);

// Constants with Delta <= c1 * DeltaPrime and DeltaPrime <= c2 * Delta.
struct EquivalenceConstants {
  double c1;
  double c2;
};

// c1 = 1 / Pr(Y=1), c2 = 2 Pr(Y=1). Throws kZeroPositiveRate.
EquivalenceConstants EquivalenceBounds(const JointDistribution& dist);

}  // namespace fairldp

#endif  // FAIRLDP_DISTRIBUTION_H_
