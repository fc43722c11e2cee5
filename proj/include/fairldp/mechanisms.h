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

#ifndef FAIRLDP_MECHANISMS_H_
#define FAIRLDP_MECHANISMS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fairldp/dataset.h"
#include "fairldp/distribution.h"
#include "fairldp/rng.h"

namespace fairldp {

// Row-stochastic k x k matrix with entry (i, j) = Pr(Z = j | A = i).
class MechanismMatrix {
 public:
  // Throws kInvalidArgument unless entries has k*k values in [0, 1] and every
  // row sums to 1 within 1e-9.
  MechanismMatrix(int k, std::vector<double> row_major_entries);

  static MechanismMatrix Identity(int k);
  static MechanismMatrix Uniform(int k);

  int k() const { return k_; }
  double at(int i, int j) const { return entries_[static_cast<size_t>(i) * k_ + j]; }
  std::span<const double> row(int i) const {
    return std::span<const double>(entries_).subspan(static_cast<size_t>(i) * k_, k_);
  }
  std::span<const double> entries() const { return entries_; }

  bool operator==(const MechanismMatrix&) const = default;

 private:
  int k_;
  std::vector<double> entries_;
};

// Binary mechanism: p = Pr(Z=0 | A=0), q = Pr(Z=1 | A=1).
struct BinaryMechanism {
  double p;
  double q;

  // Throws kInvalidArgument unless p, q are in [1/2, 1].
  void Validate() const;
};

struct SubsetReport {
  int omega;
  std::vector<int> members;  // sorted ascending
};

struct SubsetSelectionParams {
  int k;
  double epsilon;
  int omega;
  double p_true;  // probability that the true value is in the subset
};

// Generalized randomized response: diagonal e^eps / (e^eps + k - 1), off
// diagonal 1 / (e^eps + k - 1). Throws kInvalidEpsilon unless eps > 0.
MechanismMatrix GrrMatrix(int k, double epsilon);

// p = q = e^eps / (e^eps + 1).
BinaryMechanism RrMechanism(double epsilon);

// omega = round-half-away(k / (e^eps + 1)) clamped to [1, k - 1] and
// p_true = omega e^eps / (omega e^eps + k - omega).
SubsetSelectionParams SsParams(int k, double epsilon);

// Includes a with probability p_true, then fills the remaining slots by
// sampling without replacement from [k] \ {a}.
SubsetReport SsPerturb(int a, const SubsetSelectionParams& params,
                       SplitMix64& rng);

// Rows (p, 1 - p) and (1 - q, q).
MechanismMatrix MatrixOfBinary(const BinaryMechanism& mechanism);

struct LdpReport {
  bool satisfied;
  // max over columns j and rows i, i' of q_ij / q_i'j; +inf when some column
  // mixes zero and nonzero entries.
  double worst_ratio;
  int worst_column;
};

inline constexpr double kDefaultLdpTolerance = 1e-9;

// Checks q_ij <= e^eps q_i'j + tol for every column and row pair.
LdpReport VerifyLdp(const MechanismMatrix& q, double epsilon,
                    double tol = kDefaultLdpTolerance);

// Smallest eps for which q is eps-LDP: log of the worst column ratio, +inf
// when unbounded.
double PrivacyLevel(const MechanismMatrix& q);

// Law of (Z, Y) after pushing A through q. Pr(Y = 1) is carried over
// unchanged. Throws kDegenerateOutput if some Z value has zero mass and
// kAlphabetMismatch if q.k() != dist.k().
JointDistribution InducedDistribution(const JointDistribution& dist,
                                      const MechanismMatrix& q);

// Replaces each record's sensitive value by a draw from row a_i of q. Record
// i draws from SplitMix64::Stream(seed, i), so the output depends only on
// (seed, record order). `threads` <= 1 runs serially.
TabularDataset PerturbDataset(const TabularDataset& dataset,
                              const MechanismMatrix& q, uint64_t seed,
                              int threads = 1);

// Subset-selection variant: the output stores k indicator columns per record.
TabularDataset PerturbDatasetSubset(const TabularDataset& dataset,
                                    const SubsetSelectionParams& params,
                                    uint64_t seed, int threads = 1);

// Draws one value from a probability row; robust to rows summing to 1 - tiny.
int SampleCategorical(std::span<const double> probabilities, SplitMix64& rng);

}  // namespace fairldp

#endif  // FAIRLDP_MECHANISMS_H_
