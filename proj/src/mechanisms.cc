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

#include "fairldp/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fairldp/error.h"
#include "fairldp/parallel.h"

namespace fairldp {

namespace {

void CheckEpsilon(double epsilon) {
  if (!(epsilon > 0.0) || std::isnan(epsilon)) {
    throw Error(ErrorCode::kInvalidEpsilon,
                "epsilon must be positive, got " + std::to_string(epsilon));
  }
}

void CheckAlphabet(int k) {
  if (k < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "alphabet size must be >= 2, got " + std::to_string(k));
  }
}

}  // namespace

MechanismMatrix::MechanismMatrix(int k, std::vector<double> row_major_entries)
    : k_(k), entries_(std::move(row_major_entries)) {
  CheckAlphabet(k_);
  if (entries_.size() != static_cast<size_t>(k_) * k_) {
    throw Error(ErrorCode::kInvalidArgument,
                "mechanism needs k*k = " + std::to_string(k_ * k_) +
                    " entries, got " + std::to_string(entries_.size()));
  }
  for (int i = 0; i < k_; ++i) {
    double sum = 0.0;
    for (int j = 0; j < k_; ++j) {
      const double v = at(i, j);
      if (!(v >= 0.0) || !(v <= 1.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "entry (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") = " + std::to_string(v) + " is not a probability");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance) {
      throw Error(ErrorCode::kInvalidArgument,
                  "row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
  }
}

MechanismMatrix MechanismMatrix::Identity(int k) {
  CheckAlphabet(k);
  std::vector<double> entries(static_cast<size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) entries[static_cast<size_t>(i) * k + i] = 1.0;
  return MechanismMatrix(k, std::move(entries));
}

MechanismMatrix MechanismMatrix::Uniform(int k) {
  CheckAlphabet(k);
  return MechanismMatrix(k, std::vector<double>(static_cast<size_t>(k) * k, 1.0 / k));
}

void BinaryMechanism::Validate() const {
  if (!(p >= 0.5 && p <= 1.0) || !(q >= 0.5 && q <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "binary mechanism (p, q) = (" + std::to_string(p) + ", " +
                    std::to_string(q) + ") is outside [1/2, 1]^2");
  }
}

MechanismMatrix GrrMatrix(int k, double epsilon) {
  CheckAlphabet(k);
  CheckEpsilon(epsilon);
  // Divide through by e^eps so large budgets do not overflow.
  const double inv = std::exp(-epsilon);
  const double denom = 1.0 + (k - 1) * inv;
  const double truth = 1.0 / denom;
  const double lie = inv / denom;
  std::vector<double> entries(static_cast<size_t>(k) * k, lie);
  for (int i = 0; i < k; ++i) entries[static_cast<size_t>(i) * k + i] = truth;
  return MechanismMatrix(k, std::move(entries));
}

BinaryMechanism RrMechanism(double epsilon) {
  CheckEpsilon(epsilon);
  const double p = 1.0 / (1.0 + std::exp(-epsilon));
  return {p, p};
}

SubsetSelectionParams SsParams(int k, double epsilon) {
  CheckAlphabet(k);
  CheckEpsilon(epsilon);
  const double e = std::exp(epsilon);
  // std::round rounds halves away from zero.
  const double raw = std::round(static_cast<double>(k) / (e + 1.0));
  const int omega = static_cast<int>(std::clamp(raw, 1.0, static_cast<double>(k - 1)));
  // omega e / (omega e + k - omega), rewritten to stay finite for large eps.
  const double p_true =
      omega / (omega + (k - omega) * std::exp(-epsilon));
  return {k, epsilon, omega, p_true};
}

SubsetReport SsPerturb(int a, const SubsetSelectionParams& params,
                       SplitMix64& rng) {
  const int k = params.k;
  if (a < 0 || a >= k) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "value " + std::to_string(a) + " outside [0, " +
                    std::to_string(k) + ")");
  }
  SubsetReport report{params.omega, {}};
  report.members.reserve(params.omega);
  int remaining = params.omega;
  if (rng.Bernoulli(params.p_true)) {
    report.members.push_back(a);
    --remaining;
  }
  std::vector<int> others;
  others.reserve(k - 1);
  for (int v = 0; v < k; ++v) {
    if (v != a) others.push_back(v);
  }
  // Partial Fisher-Yates: the first `remaining` slots are a uniform sample
  // without replacement.
  for (int i = 0; i < remaining; ++i) {
    const size_t j = i + rng.NextBelow(others.size() - i);
    std::swap(others[i], others[j]);
    report.members.push_back(others[i]);
  }
  std::sort(report.members.begin(), report.members.end());
  return report;
}

MechanismMatrix MatrixOfBinary(const BinaryMechanism& mechanism) {
  return MechanismMatrix(2, {mechanism.p, 1.0 - mechanism.p, 1.0 - mechanism.q,
                             mechanism.q});
}

namespace {

struct ColumnRatio {
  double ratio;  // max / min over the column, +inf if min = 0 < max
  double max;
  double min;
};

ColumnRatio ColumnWorstRatio(const MechanismMatrix& q, int column) {
  double hi = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < q.k(); ++i) {
    hi = std::max(hi, q.at(i, column));
    lo = std::min(lo, q.at(i, column));
  }
  if (hi == 0.0) return {1.0, hi, lo};
  if (lo == 0.0) return {std::numeric_limits<double>::infinity(), hi, lo};
  return {hi / lo, hi, lo};
}

}  // namespace

LdpReport VerifyLdp(const MechanismMatrix& q, double epsilon, double tol) {
  const double bound = std::exp(epsilon);
  LdpReport report{true, 1.0, 0};
  for (int j = 0; j < q.k(); ++j) {
    const ColumnRatio column = ColumnWorstRatio(q, j);
    if (column.ratio > report.worst_ratio) {
      report.worst_ratio = column.ratio;
      report.worst_column = j;
    }
    // The largest violation in a column pairs its max with its min.
    if (column.max - bound * column.min > tol) report.satisfied = false;
  }
  return report;
}

double PrivacyLevel(const MechanismMatrix& q) {
  double worst = 1.0;
  for (int j = 0; j < q.k(); ++j) {
    worst = std::max(worst, ColumnWorstRatio(q, j).ratio);
  }
  return std::log(worst);
}

JointDistribution InducedDistribution(const JointDistribution& dist,
                                      const MechanismMatrix& q) {
  const int k = dist.k();
  if (q.k() != k) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "mechanism alphabet " + std::to_string(q.k()) +
                    " != distribution alphabet " + std::to_string(k));
  }
  std::vector<double> mass(k, 0.0);
  std::vector<double> positive(k, 0.0);
  for (int a = 0; a < k; ++a) {
    for (int j = 0; j < k; ++j) {
      const double joint = dist.group_prob(j) * q.at(j, a);
      mass[a] += joint;
      positive[a] += dist.pos_rate(j) * joint;
    }
  }
  std::vector<double> rates(k);
  for (int a = 0; a < k; ++a) {
    if (!(mass[a] > 0.0)) {
      throw Error(ErrorCode::kDegenerateOutput,
                  "output value " + std::to_string(a) + " has zero probability");
    }
    rates[a] = std::clamp(positive[a] / mass[a], 0.0, 1.0);
  }
  // Renormalize away rounding so the group probabilities sum to one exactly
  // enough for the constructor's checks.
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  for (double& m : mass) m /= total;
  return JointDistribution(std::move(mass), std::move(rates),
                           dist.pos_marginal());
}

int SampleCategorical(std::span<const double> probabilities, SplitMix64& rng) {
  const double u = rng.NextUnit();
  double cumulative = 0.0;
  int last_positive = 0;
  for (size_t j = 0; j < probabilities.size(); ++j) {
    if (probabilities[j] <= 0.0) continue;
    last_positive = static_cast<int>(j);
    cumulative += probabilities[j];
    if (u < cumulative) return static_cast<int>(j);
  }
  return last_positive;
}

TabularDataset PerturbDataset(const TabularDataset& dataset,
                              const MechanismMatrix& q, uint64_t seed,
                              int threads) {
  if (dataset.encoding != SensitiveEncoding::kIndex) {
    throw Error(ErrorCode::kInvalidArgument,
                "dataset sensitive column is already subset-encoded");
  }
  if (q.k() != dataset.k()) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "mechanism alphabet " + std::to_string(q.k()) +
                    " != dataset alphabet " + std::to_string(dataset.k()));
  }
  TabularDataset out = dataset;
  ParallelFor(dataset.size(), threads, [&](size_t i) {
    SplitMix64 rng = SplitMix64::Stream(seed, i);
    out.sensitive[i] = SampleCategorical(q.row(dataset.sensitive[i]), rng);
  });
  return out;
}

TabularDataset PerturbDatasetSubset(const TabularDataset& dataset,
                                    const SubsetSelectionParams& params,
                                    uint64_t seed, int threads) {
  if (dataset.encoding != SensitiveEncoding::kIndex) {
    throw Error(ErrorCode::kInvalidArgument,
                "dataset sensitive column is already subset-encoded");
  }
  if (params.k != dataset.k()) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "subset-selection alphabet " + std::to_string(params.k) +
                    " != dataset alphabet " + std::to_string(dataset.k()));
  }
  const size_t k = static_cast<size_t>(params.k);
  TabularDataset out = dataset;
  out.encoding = SensitiveEncoding::kSubsetIndicators;
  out.sensitive.clear();
  out.subset_indicators.assign(dataset.size() * k, 0);
  ParallelFor(dataset.size(), threads, [&](size_t i) {
    SplitMix64 rng = SplitMix64::Stream(seed, i);
    const SubsetReport report = SsPerturb(dataset.sensitive[i], params, rng);
    for (int member : report.members) out.subset_indicators[i * k + member] = 1;
  });
  return out;
}

}  // namespace fairldp
