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

#ifndef FAIRLDP_PIPELINE_H_
#define FAIRLDP_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairldp/classify.h"
#include "fairldp/dataset.h"
#include "fairldp/json_io.h"
#include "fairldp/mechanisms.h"
#include "fairldp/opt_binary.h"
#include "fairldp/opt_kary.h"

namespace fairldp {

enum class MechanismKind { kNonPrivate, kRr, kGrr, kSs, kOptBinary, kOptKary };

// Config spellings: non_private, rr, grr, ss, opt_binary, opt_kary.
const char* MechanismKindName(MechanismKind kind);
MechanismKind ParseMechanismKind(const std::string& name);

struct SplitConfig {
  double train_fraction = 0.8;
  int trials = 20;
};

struct EvalConfig {
  Calibration calibration = Calibration::kFixed;
  bool sensitive_as_feature = true;
  bool skip_undefined_groups = false;
};

struct RunConfig {
  MechanismKind mechanism = MechanismKind::kOptBinary;
  double epsilon = 1.0;
  // Present iff some mechanism in use is opt_kary.
  std::optional<double> zeta;
  uint64_t seed = 0;
  std::string input;
  ColumnsConfig columns;
  SplitConfig split;
  EvalConfig eval;
  TrainingOptions training;
  // Mechanisms compared by the sweep; empty means {mechanism}.
  std::vector<MechanismKind> sweep_mechanisms;
  std::vector<double> sweep_epsilons;
  // Worker threads. Never affects any output byte.
  int threads = 1;

  // Throws kConfig.
  void Validate() const;
  std::vector<MechanismKind> SweepMechanisms() const;
};

// Strict parse: unknown keys, wrong types and invalid values throw kConfig.
RunConfig ParseRunConfig(const nlohmann::json& doc);
// Canonical echo of every output-affecting field (threads excluded).
Json RunConfigToJson(const RunConfig& config);

// A mechanism designed for one distribution at one privacy level.
struct DesignedMechanism {
  MechanismKind kind = MechanismKind::kNonPrivate;
  // Declared privacy level; infinite for non_private.
  double epsilon = 0.0;
  // Absent only for ss, whose outputs are subsets.
  std::optional<MechanismMatrix> matrix;
  std::optional<SubsetSelectionParams> subset;
  std::optional<BinaryDesignResult> binary;
  std::optional<KaryDesignResult> kary;
};

// Every returned matrix has passed VerifyLdp at `epsilon`; a failure throws
// kNumericalFailure rather than emitting the mechanism.
DesignedMechanism DesignMechanism(MechanismKind kind,
                                  const JointDistribution& dist, double epsilon,
                                  std::optional<double> zeta);

// {"type": "matrix", "name", "epsilon", "k", "entries", "epsilon_star"} or
// {"type": "subset_selection", "name", "epsilon", "k", "omega", "p_true"}.
Json DesignedMechanismToJson(const DesignedMechanism& mechanism);

// Accepts a design report (uses its "mechanism" member) or a bare mechanism
// document. Throws kSchemaMismatch on malformed input.
DesignedMechanism DesignedMechanismFromJson(const nlohmann::json& doc);

// Train/test record indices for one trial; both sides are non-empty.
struct Split {
  std::vector<size_t> train;
  std::vector<size_t> test;
};
Split SplitIndices(size_t n, double train_fraction, uint64_t seed);

struct TrialResult {
  int trial = 0;
  uint64_t seed = 0;
  FairnessReport report;
};

// Trial t: split with seed ^ t, design on the original train split, perturb
// the train split only, train, evaluate on the original test split. Splits
// depend only on (seed, t), so they are shared across mechanisms.
std::vector<TrialResult> RunTrials(const RunConfig& config, MechanismKind kind,
                                   double epsilon, const TabularDataset& data);

struct MetricSummary {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// mean +- 1.96 standard errors; values are sorted before reduction so the
// result is independent of their order.
MetricSummary Summarize(std::vector<double> values);

inline constexpr const char* kMetricNames[] = {"accuracy", "sp_gap", "eo_gap",
                                               "meo_gap", "eod_gap"};
double MetricValue(const FairnessReport& report, const std::string& metric);

// Loads config.input; throws kConfig when it is unset.
TabularDataset LoadInput(const RunConfig& config);

Json DesignReport(const RunConfig& config, const TabularDataset& data);
Json CmdDesign(const RunConfig& config);

// Input CSV with only the sensitive column replaced (ss: k indicator
// columns named "<sensitive>=<value>" in its place), plus a header comment
// recording the seed and the mechanism fingerprint.
std::string CmdPerturb(const RunConfig& config, const nlohmann::json& mechanism_doc);

struct EvaluateOutput {
  Json report;
  std::string trials_csv;
};
EvaluateOutput EvaluateDataset(const RunConfig& config, const TabularDataset& data);
EvaluateOutput CmdEvaluate(const RunConfig& config);

// Long-format CSV: mechanism, epsilon, metric, mean, ci_low, ci_high.
// Throws kConfig on an empty epsilon list.
std::string SweepDataset(const RunConfig& config, const TabularDataset& data,
                         const std::vector<double>& epsilons);
std::string CmdSweep(const RunConfig& config, const std::vector<double>& epsilons);

struct VerifyOutput {
  bool passed = false;
  Json report;
};
// Re-checks a mechanism document (LDP at its declared level, stored privacy
// level and predicted unfairness) and, when given, an evaluation report
// (gaps recomputed from per-group rates, summaries from trials).
VerifyOutput CmdVerify(const nlohmann::json& mechanism_doc,
                       const nlohmann::json* evaluation_doc);

}  // namespace fairldp

#endif  // FAIRLDP_PIPELINE_H_
