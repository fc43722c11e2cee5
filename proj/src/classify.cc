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

#include "fairldp/classify.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "fairldp/error.h"

namespace fairldp {

const char* CalibrationName(Calibration c) {
  return c == Calibration::kFixed ? "fixed" : "base_rate_match";
}

Calibration ParseCalibration(const std::string& name) {
  if (name == "fixed") return Calibration::kFixed;
  if (name == "base_rate_match") return Calibration::kBaseRateMatch;
  throw Error(ErrorCode::kConfig, "unknown calibration '" + name + "'");
}

namespace {

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Row-major design matrix in the classifier's weight layout (without bias).
std::vector<double> DesignMatrix(const LinearClassifier& model,
                                 const TabularDataset& data) {
  const size_t n = data.size();
  const size_t f = model.feature_names.size();
  const size_t k = model.sensitive_as_feature ? static_cast<size_t>(model.k) : 0;
  const size_t width = f + k;
  std::vector<double> design(n * width, 0.0);
  for (size_t c = 0; c < f; ++c) {
    const std::vector<double>& values = data.features[c].values;
    for (size_t r = 0; r < n; ++r) {
      design[r * width + c] =
          (values[r] - model.feature_means[c]) / model.feature_scales[c];
    }
  }
  if (k > 0) {
    for (size_t r = 0; r < n; ++r) {
      if (data.encoding == SensitiveEncoding::kIndex) {
        design[r * width + f + data.sensitive[r]] = 1.0;
      } else {
        for (size_t a = 0; a < k; ++a) {
          design[r * width + f + a] = data.subset_indicators[r * k + a];
        }
      }
    }
  }
  return design;
}

void CheckSchema(const LinearClassifier& model, const TabularDataset& data) {
  if (data.features.size() != model.feature_names.size()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "dataset has " + std::to_string(data.features.size()) +
                    " feature columns, model expects " +
                    std::to_string(model.feature_names.size()));
  }
  for (size_t c = 0; c < data.features.size(); ++c) {
    if (data.features[c].name != model.feature_names[c]) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "feature " + std::to_string(c) + " is '" +
                      data.features[c].name + "', model expects '" +
                      model.feature_names[c] + "'");
    }
  }
  if (data.k() != model.k) {
    throw Error(ErrorCode::kSchemaMismatch,
                "dataset has k = " + std::to_string(data.k()) +
                    ", model expects k = " + std::to_string(model.k));
  }
}

}  // namespace

std::vector<double> LinearClassifier::Scores(const TabularDataset& data) const {
  CheckSchema(*this, data);
  const std::vector<double> design = DesignMatrix(*this, data);
  const size_t width = weights.size() - 1;
  std::vector<double> scores(data.size());
  for (size_t r = 0; r < data.size(); ++r) {
    double z = weights.back();
    for (size_t c = 0; c < width; ++c) z += weights[c] * design[r * width + c];
    scores[r] = Sigmoid(z);
  }
  return scores;
}

LinearClassifier TrainLogistic(const TabularDataset& train,
                               const TrainingOptions& options) {
  train.Validate();
  const size_t n = train.size();
  size_t positives = 0;
  for (int y : train.labels) positives += y;
  if (positives < 2 || n - positives < 2) {
    throw Error(ErrorCode::kSingleClassTrainingSet,
                "training needs >= 2 records per class (positives: " +
                    std::to_string(positives) + ", negatives: " +
                    std::to_string(n - positives) + ")");
  }

  LinearClassifier model;
  model.k = train.k();
  model.sensitive_as_feature = options.sensitive_as_feature;
  for (const FeatureColumn& column : train.features) {
    model.feature_names.push_back(column.name);
    double mean = 0.0;
    for (double v : column.values) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : column.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    model.feature_means.push_back(mean);
    model.feature_scales.push_back(var > 0.0 ? std::sqrt(var) : 1.0);
  }
  const std::vector<double> design = DesignMatrix(model, train);
  const size_t width = model.feature_names.size() +
                       (model.sensitive_as_feature ? static_cast<size_t>(model.k) : 0);
  model.weights.assign(width + 1, 0.0);

  std::vector<double> gradient(width + 1);
  for (int epoch = 0; epoch < options.max_epochs; ++epoch) {
    std::fill(gradient.begin(), gradient.end(), 0.0);
    double loss = 0.0;
    for (size_t r = 0; r < n; ++r) {
      const double* x = &design[r * width];
      double z = model.weights[width];
      for (size_t c = 0; c < width; ++c) z += model.weights[c] * x[c];
      const double p = Sigmoid(z);
      const double residual = p - train.labels[r];
      for (size_t c = 0; c < width; ++c) gradient[c] += residual * x[c];
      gradient[width] += residual;
      // log(1 + e^z) - y z, evaluated stably.
      loss += (z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z))) -
              train.labels[r] * z;
    }
    double norm2 = 0.0;
    for (size_t c = 0; c <= width; ++c) {
      gradient[c] /= static_cast<double>(n);
      if (c < width) gradient[c] += options.l2 * model.weights[c];
      norm2 += gradient[c] * gradient[c];
    }
    if (!std::isfinite(loss) || !std::isfinite(norm2)) {
      throw Error(ErrorCode::kNonFiniteLoss,
                  "log-loss became non-finite at epoch " + std::to_string(epoch));
    }
    model.epochs_run = epoch + 1;
    model.final_gradient_norm = std::sqrt(norm2);
    if (model.final_gradient_norm < options.gradient_tol) break;
    for (size_t c = 0; c <= width; ++c) {
      model.weights[c] -= options.learning_rate * gradient[c];
    }
  }
  return model;
}

double BaseRateThreshold(std::span<const double> scores, double base_rate) {
  if (scores.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no scores to calibrate on");
  }
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const size_t n = sorted.size();
  const size_t target = static_cast<size_t>(
      std::llround(std::clamp(base_rate, 0.0, 1.0) * static_cast<double>(n)));
  const double tiny = std::numeric_limits<double>::denorm_min();
  if (target >= n) {
    return std::max(tiny, std::nextafter(sorted.back(), 0.0));
  }
  // Scores strictly above sorted[target] are at most `target` records.
  return std::clamp(sorted[target], tiny, std::nextafter(1.0, 0.0));
}

std::vector<int> Predict(std::span<const double> scores, double threshold) {
  std::vector<int> preds(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) preds[i] = scores[i] > threshold ? 1 : 0;
  return preds;
}

std::vector<GroupRates> ComputeGroupRates(std::span<const int> preds,
                                          std::span<const int> labels,
                                          std::span<const int> groups, int k) {
  if (preds.size() != groups.size() ||
      (!labels.empty() && labels.size() != groups.size())) {
    throw Error(ErrorCode::kInvalidArgument,
                "predictions, labels and groups differ in length");
  }
  struct Counts {
    size_t count = 0, predicted = 0, positives = 0, negatives = 0, tp = 0, fp = 0;
  };
  std::vector<Counts> counts(k);
  for (size_t i = 0; i < groups.size(); ++i) {
    const int a = groups[i];
    if (a < 0 || a >= k) {
      throw Error(ErrorCode::kInvalidArgument,
                  "group " + std::to_string(a) + " outside [0, " +
                      std::to_string(k) + ")");
    }
    Counts& c = counts[a];
    ++c.count;
    c.predicted += preds[i];
    if (labels.empty()) continue;
    if (labels[i] == 1) {
      ++c.positives;
      c.tp += preds[i];
    } else {
      ++c.negatives;
      c.fp += preds[i];
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<GroupRates> rates;
  rates.reserve(k);
  for (int a = 0; a < k; ++a) {
    const Counts& c = counts[a];
    rates.push_back(
        {a, c.count, c.positives, c.negatives,
         c.count ? static_cast<double>(c.predicted) / c.count : nan,
         c.positives ? static_cast<double>(c.tp) / c.positives : nan,
         c.negatives ? static_cast<double>(c.fp) / c.negatives : nan});
  }
  return rates;
}

namespace {

double MaxMinusMin(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

}  // namespace

double StatisticalParityGap(std::span<const int> preds,
                            std::span<const int> groups, int k) {
  std::vector<double> rates;
  for (const GroupRates& g : ComputeGroupRates(preds, {}, groups, k)) {
    if (g.count == 0) {
      throw Error(ErrorCode::kEmptyGroup,
                  "group " + std::to_string(g.group) + " has no records");
    }
    rates.push_back(g.positive_prediction_rate);
  }
  return MaxMinusMin(rates);
}

double EqualizedOpportunityGap(std::span<const int> preds,
                               std::span<const int> labels,
                               std::span<const int> groups, int k) {
  std::vector<double> tprs;
  for (const GroupRates& g : ComputeGroupRates(preds, labels, groups, k)) {
    if (g.positives == 0) {
      throw Error(ErrorCode::kUndefinedRate,
                  "group " + std::to_string(g.group) + " has no positive labels");
    }
    tprs.push_back(g.tpr);
  }
  return MaxMinusMin(tprs);
}

namespace {

EqualizedOddsGaps OddsGapsOver(const std::vector<const GroupRates*>& groups) {
  EqualizedOddsGaps gaps{0.0, 0.0};
  for (size_t i = 0; i < groups.size(); ++i) {
    for (size_t j = i + 1; j < groups.size(); ++j) {
      const double dtpr = std::abs(groups[i]->tpr - groups[j]->tpr);
      const double dfpr = std::abs(groups[i]->fpr - groups[j]->fpr);
      gaps.meo = std::max(gaps.meo, 0.5 * (dtpr + dfpr));
      gaps.eod = std::max(gaps.eod, std::max(dtpr, dfpr));
    }
  }
  return gaps;
}

}  // namespace

EqualizedOddsGaps ComputeEqualizedOddsGaps(std::span<const int> preds,
                                           std::span<const int> labels,
                                           std::span<const int> groups, int k) {
  const std::vector<GroupRates> rates = ComputeGroupRates(preds, labels, groups, k);
  std::vector<const GroupRates*> defined;
  for (const GroupRates& g : rates) {
    if (g.positives == 0 || g.negatives == 0) {
      throw Error(ErrorCode::kUndefinedRate,
                  "group " + std::to_string(g.group) +
                      " lacks positive or negative labels");
    }
    defined.push_back(&g);
  }
  return OddsGapsOver(defined);
}

FairnessReport GapsFromRates(std::vector<GroupRates> per_group,
                             bool skip_undefined) {
  FairnessReport report;
  std::vector<double> prediction_rates;
  std::vector<double> tprs;
  std::vector<const GroupRates*> odds_groups;
  for (const GroupRates& g : per_group) {
    if (g.count == 0) {
      if (skip_undefined) {
        report.skipped_groups.push_back(g.group);
        continue;
      }
      throw Error(ErrorCode::kEmptyGroup,
                  "group " + std::to_string(g.group) + " has no records");
    }
    prediction_rates.push_back(g.positive_prediction_rate);
    if (g.positives == 0 || g.negatives == 0) {
      if (skip_undefined) {
        report.skipped_groups.push_back(g.group);
        continue;
      }
      throw Error(ErrorCode::kUndefinedRate,
                  "group " + std::to_string(g.group) +
                      " lacks positive or negative labels");
    }
    tprs.push_back(g.tpr);
    odds_groups.push_back(&g);
  }
  report.sp_gap = MaxMinusMin(prediction_rates);
  report.eo_gap = MaxMinusMin(tprs);
  const EqualizedOddsGaps odds = OddsGapsOver(odds_groups);
  report.meo_gap = odds.meo;
  report.eod_gap = odds.eod;
  report.per_group = std::move(per_group);
  return report;
}

FairnessReport Evaluate(const LinearClassifier& model,
                        const TabularDataset& test,
                        const EvaluationOptions& options) {
  if (test.encoding != SensitiveEncoding::kIndex) {
    throw Error(ErrorCode::kSchemaMismatch,
                "evaluation needs the original sensitive column");
  }
  test.Validate();
  if (test.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty test set");
  }
  const std::vector<double> scores = model.Scores(test);
  double threshold = model.threshold;
  if (options.calibration == Calibration::kBaseRateMatch) {
    double base_rate = 0.0;
    for (int y : test.labels) base_rate += y;
    base_rate /= static_cast<double>(test.size());
    threshold = BaseRateThreshold(scores, base_rate);
  }
  const std::vector<int> preds = Predict(scores, threshold);
  size_t correct = 0;
  for (size_t i = 0; i < preds.size(); ++i) correct += preds[i] == test.labels[i];

  FairnessReport report = GapsFromRates(
      ComputeGroupRates(preds, test.labels, test.sensitive, test.k()),
      options.skip_undefined_groups);
  report.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
  report.threshold = threshold;
  return report;
}

}  // namespace fairldp
