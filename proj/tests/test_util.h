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

#ifndef FAIRLDP_TESTS_TEST_UTIL_H_
#define FAIRLDP_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fairldp/dataset.h"
#include "fairldp/distribution.h"
#include "fairldp/rng.h"

namespace fairldp::testing {

// Group probabilities bounded away from 0 and rates in [0.02, 0.98].
inline JointDistribution RandomDistribution(SplitMix64& rng, int k) {
  std::vector<double> probs(k);
  std::vector<double> rates(k);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    probs[i] = 0.05 + rng.NextUnit();
    total += probs[i];
    rates[i] = 0.02 + 0.96 * rng.NextUnit();
  }
  for (double& p : probs) p /= total;
  return JointDistribution::FromRates(probs, rates);
}

// Records with A ~ group_probs, Y | A ~ Bernoulli(pos_rates[A]) and
// features X | Y ~ N(separation * (2Y - 1) * e_1, I) independent of A given
// Y, so the logistic model over (X, onehot(A)) is well specified.
struct PlantedGenerator {
  std::vector<double> group_probs = {0.6, 0.4};
  std::vector<double> pos_rates = {0.3, 0.7};
  double separation = 1.0;
  int num_features = 3;

  TabularDataset Sample(size_t n, uint64_t seed) const {
    SplitMix64 rng(seed);
    TabularDataset data;
    const int k = static_cast<int>(group_probs.size());
    for (int a = 0; a < k; ++a) data.sensitive_values.push_back("g" + std::to_string(a));
    for (int f = 0; f < num_features; ++f) data.features.push_back({"x" + std::to_string(f), {}});
    for (size_t r = 0; r < n; ++r) {
      double u = rng.NextUnit();
      int a = 0;
      while (a + 1 < k && u >= group_probs[a]) u -= group_probs[a++];
      const int y = rng.Bernoulli(pos_rates[a]) ? 1 : 0;
      for (int f = 0; f < num_features; ++f) {
        const double mean = f == 0 ? separation * (2 * y - 1) : 0.0;
        data.features[f].values.push_back(mean + rng.NextGaussian());
      }
      data.sensitive.push_back(a);
      data.labels.push_back(y);
    }
    return data;
  }

  // Error of the Bayes classifier that sees (X, A); predict 1 iff
  // 2 * separation * x_1 + logit(r_a) > 0.
  double BayesAccuracy() const {
    const auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    double error = 0.0;
    for (size_t a = 0; a < group_probs.size(); ++a) {
      const double r = pos_rates[a];
      const double tau = -std::log(r / (1.0 - r)) / (2.0 * separation);
      error += group_probs[a] *
               (r * phi(tau - separation) + (1.0 - r) * (1.0 - phi(tau + separation)));
    }
    return 1.0 - error;
  }
};

}  // namespace fairldp::testing

#endif  // FAIRLDP_TESTS_TEST_UTIL_H_
