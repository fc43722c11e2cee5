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

#ifndef FAIRLDP_CLASSIFY_H_
#define FAIRLDP_CLASSIFY_H_

#include <span>
#include <string>
#include <vector>

#include "fairldp/dataset.h"

namespace fairldp {

enum class Calibration { kFixed, kBaseRateMatch };

const char* CalibrationName(Calibration c);
Calibration ParseCalibration(const std::string& name);

struct TrainingOptions {
  double learning_rate = 0.5;
  int max_epochs = 2000;
  // Stop when the Euclidean norm of the mean log-loss gradient drops below.
  double gradient_tol = 1e-6;
  double l2 = 0.0;
  // Feed the sensitive attribute (one-hot, or subset indicators) to the
  // model as features.
  bool sensitive_as_feature = true;
};

// Logistic model over standardized features, optional sensitive one-hot
// columns and a bias. The standardization is fit on the training data.
struct LinearClassifier {
  std::vector<std::string> feature_names;
  std::vector<double> feature_means;
  std::vector<double> feature_scales;
  int k = 0;
  bool sensitive_as_feature = true;
  // Layout: one weight per feature, then k sensitive weights when
  // sensitive_as_feature, then the bias.
  std::vector<double> weights;
  double threshold = 0.5;
  Calibration calibration = Calibration::kFixed;
  int epochs_run = 0;
  double final_gradient_norm = 0.0;

  // Pr(Y = 1 | record) for every record of `data`. Throws kSchemaMismatch
  // when the features differ from the training schema.
  std::vector<double> Scores(const TabularDataset& data) const;
};

// Full-batch gradient descent on the mean log-loss from zero weights, so
// runs are reproducible without randomness. Throws kSingleClassTrainingSet
// when either class has fewer than two records and kNonFiniteLoss if the
// loss diverges.
LinearClassifier TrainLogistic(const TabularDataset& train,
                               const TrainingOptions& options = {});

// Threshold at which exactly round(base_rate * n) scores are strictly
// above it when scores are distinct; ties resolve toward fewer positives.
double BaseRateThreshold(std::span<const double> scores, double base_rate);

// Predictions are 1 iff score > threshold.
std::vector<int> Predict(std::span<const double> scores, double threshold);

struct GroupRates {
  int group;
  size_t count;
  size_t positives;  // records with Y = 1
  size_t negatives;
  double positive_prediction_rate;
  double tpr;  // NaN when positives == 0
  double fpr;  // NaN when negatives == 0
};

std::vector<GroupRates> ComputeGroupRates(std::span<const int> preds,
                                          std::span<const int> labels,
                                          std::span<const int> groups, int k);

// max over group pairs of |Pr(Yhat=1|A=a) - Pr(Yhat=1|A=a')|. Throws
// kEmptyGroup when a group in [0, k) has no records.
double StatisticalParityGap(std::span<const int> preds,
                            std::span<const int> groups, int k);

// max pairwise TPR difference. Throws kUndefinedRate when a group has no
// positive-label records.
double EqualizedOpportunityGap(std::span<const int> preds,
                               std::span<const int> labels,
                               std::span<const int> groups, int k);

struct EqualizedOddsGaps {
  double meo;  // max pair of (|dTPR| + |dFPR|) / 2
  double eod;  // max pair of max(|dTPR|, |dFPR|)
};

// Throws kUndefinedRate when a group lacks positives or negatives.
EqualizedOddsGaps ComputeEqualizedOddsGaps(std::span<const int> preds,
                                           std::span<const int> labels,
                                           std::span<const int> groups, int k);

struct FairnessReport {
  double accuracy = 0.0;
  double sp_gap = 0.0;
  double eo_gap = 0.0;
  double meo_gap = 0.0;
  double eod_gap = 0.0;
  double threshold = 0.5;
  std::vector<GroupRates> per_group;
  // Groups left out of TPR/FPR comparisons (only with skip_undefined_groups).
  std::vector<int> skipped_groups;
};

// Gaps recomputed from a per-group table; groups whose rate is undefined are
// excluded only when `skip_undefined` is set, otherwise kUndefinedRate.
FairnessReport GapsFromRates(std::vector<GroupRates> per_group,
                             bool skip_undefined);

struct EvaluationOptions {
  Calibration calibration = Calibration::kFixed;
  bool skip_undefined_groups = false;
};

// Scores the (unperturbed) test set and reports accuracy and all gaps, with
// groups taken from the test set's own sensitive column.
FairnessReport Evaluate(const LinearClassifier& model,
                        const TabularDataset& test,
                        const EvaluationOptions& options = {});

}  // namespace fairldp

#endif  // FAIRLDP_CLASSIFY_H_
