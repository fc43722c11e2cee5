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

#include "fairldp/pipeline.h"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>

#include "fairldp/csv.h"
#include "fairldp/distribution.h"
#include "fairldp/error.h"
#include "fairldp/parallel.h"
#include "fairldp/rng.h"

namespace fairldp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Stream ids keep the split and perturbation randomness of a trial disjoint.
constexpr uint64_t kSplitStream = 0x73706c6974ULL;
constexpr uint64_t kPerturbSalt = 0x7065727475726221ULL;
constexpr double kVerifyTolerance = 1e-9;
constexpr double kGapTolerance = 1e-12;

constexpr std::pair<MechanismKind, const char*> kMechanismNames[] = {
    {MechanismKind::kNonPrivate, "non_private"}, {MechanismKind::kRr, "rr"},
    {MechanismKind::kGrr, "grr"},                {MechanismKind::kSs, "ss"},
    {MechanismKind::kOptBinary, "opt_binary"},   {MechanismKind::kOptKary, "opt_kary"},
};

[[noreturn]] void ConfigError(const std::string& message) {
  throw Error(ErrorCode::kConfig, message);
}

void CheckKeys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
               const std::string& where) {
  if (!obj.is_object()) ConfigError("'" + where + "' must be an object");
  for (const auto& item : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* key) { return item.key() == key; })) {
      ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

int GetInt(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number_integer()) ConfigError("'" + key + "' must be an integer");
  return value.get<int>();
}

double GetNumber(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number()) ConfigError("'" + key + "' must be a number");
  return value.get<double>();
}

bool GetBool(const nlohmann::json& value, const std::string& key) {
  if (!value.is_boolean()) ConfigError("'" + key + "' must be a boolean");
  return value.get<bool>();
}

std::string GetString(const nlohmann::json& value, const std::string& key) {
  if (!value.is_string()) ConfigError("'" + key + "' must be a string");
  return value.get<std::string>();
}

std::vector<std::string> GetStrings(const nlohmann::json& value, const std::string& key) {
  if (!value.is_array()) ConfigError("'" + key + "' must be a list of strings");
  std::vector<std::string> out;
  for (const auto& item : value) out.push_back(GetString(item, key));
  return out;
}

bool IsPositiveFinite(double v) { return std::isfinite(v) && v > 0.0; }

Json InputJson(const TabularDataset& data) {
  Json doc;
  doc["path"] = data.provenance.source_path;
  doc["config_hash"] = data.provenance.config_hash;
  doc["records"] = data.size();
  doc["k"] = data.k();
  doc["sensitive_values"] = data.sensitive_values;
  return doc;
}

// Predicted unfairness of the data after `q`.
std::pair<double, double> PredictedUnfairness(const JointDistribution& dist,
                                              const MechanismMatrix& q) {
  const JointDistribution induced = InducedDistribution(dist, q);
  return {Delta(induced), DeltaPrime(induced)};
}

}  // namespace

const char* MechanismKindName(MechanismKind kind) {
  for (const auto& [k, name] : kMechanismNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

MechanismKind ParseMechanismKind(const std::string& name) {
  for (const auto& [kind, spelled] : kMechanismNames) {
    if (name == spelled) return kind;
  }
  ConfigError("unknown mechanism '" + name +
              "' (expected non_private, rr, grr, ss, opt_binary or opt_kary)");
}

std::vector<MechanismKind> RunConfig::SweepMechanisms() const {
  return sweep_mechanisms.empty() ? std::vector<MechanismKind>{mechanism}
                                  : sweep_mechanisms;
}

void RunConfig::Validate() const {
  if (!IsPositiveFinite(epsilon)) {
    ConfigError("epsilon must be positive and finite, got " + FormatNumber(epsilon));
  }
  const std::vector<MechanismKind> used = [&] {
    std::vector<MechanismKind> all = SweepMechanisms();
    all.push_back(mechanism);
    return all;
  }();
  const bool needs_zeta =
      std::find(used.begin(), used.end(), MechanismKind::kOptKary) != used.end();
  if (needs_zeta && !zeta) ConfigError("zeta is required for opt_kary");
  if (!needs_zeta && zeta) ConfigError("zeta is only meaningful for opt_kary");
  if (zeta && !(*zeta >= 0.0 && *zeta <= 1.0)) {
    ConfigError("zeta must lie in [0, 1], got " + FormatNumber(*zeta));
  }
  if (!(split.train_fraction > 0.0 && split.train_fraction < 1.0)) {
    ConfigError("split.train_fraction must lie in (0, 1)");
  }
  if (split.trials < 1) ConfigError("split.trials must be >= 1");
  if (threads < 1) ConfigError("threads must be >= 1");
  if (columns.sensitive.empty()) ConfigError("columns.sensitive is required");
  if (columns.label.empty()) ConfigError("columns.label is required");
  if (!IsPositiveFinite(training.learning_rate)) {
    ConfigError("training.learning_rate must be positive");
  }
  if (training.max_epochs < 1) ConfigError("training.max_epochs must be >= 1");
  if (!(training.gradient_tol >= 0.0) || !(training.l2 >= 0.0)) {
    ConfigError("training.gradient_tol and training.l2 must be >= 0");
  }
  for (double e : sweep_epsilons) {
    if (!IsPositiveFinite(e)) ConfigError("sweep epsilons must be positive and finite");
  }
}

RunConfig ParseRunConfig(const nlohmann::json& doc) {
  CheckKeys(doc, {"mechanism", "epsilon", "zeta", "seed", "input", "columns", "split",
                  "eval", "training", "sweep", "threads"},
            "config");
  RunConfig c;
  if (doc.contains("mechanism")) {
    c.mechanism = ParseMechanismKind(GetString(doc["mechanism"], "mechanism"));
  }
  if (doc.contains("epsilon")) c.epsilon = GetNumber(doc["epsilon"], "epsilon");
  if (doc.contains("zeta") && !doc["zeta"].is_null()) {
    c.zeta = GetNumber(doc["zeta"], "zeta");
  }
  if (doc.contains("seed")) {
    const auto& seed = doc["seed"];
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<int64_t>() >= 0)) {
      ConfigError("'seed' must be a non-negative 64-bit integer");
    }
    c.seed = seed.get<uint64_t>();
  }
  if (doc.contains("input")) c.input = GetString(doc["input"], "input");
  if (doc.contains("threads")) c.threads = GetInt(doc["threads"], "threads");
  if (doc.contains("columns")) {
    const auto& cols = doc["columns"];
    CheckKeys(cols, {"sensitive", "label", "positive_label", "negative_label", "features",
                     "sensitive_order"},
              "columns");
    if (cols.contains("sensitive")) {
      c.columns.sensitive = GetString(cols["sensitive"], "columns.sensitive");
    }
    if (cols.contains("label")) c.columns.label = GetString(cols["label"], "columns.label");
    if (cols.contains("positive_label")) {
      c.columns.positive_label = GetString(cols["positive_label"], "columns.positive_label");
    }
    if (cols.contains("negative_label") && !cols["negative_label"].is_null()) {
      c.columns.negative_label = GetString(cols["negative_label"], "columns.negative_label");
    }
    if (cols.contains("features")) {
      const auto& f = cols["features"];
      if (f.is_string()) {
        if (f.get<std::string>() != "auto") {
          ConfigError("columns.features must be \"auto\" or a list");
        }
      } else {
        c.columns.features = GetStrings(f, "columns.features");
        if (c.columns.features.empty()) ConfigError("columns.features list is empty");
      }
    }
    if (cols.contains("sensitive_order")) {
      c.columns.sensitive_order = GetStrings(cols["sensitive_order"], "columns.sensitive_order");
    }
  }
  if (doc.contains("split")) {
    const auto& split = doc["split"];
    CheckKeys(split, {"train_fraction", "trials"}, "split");
    if (split.contains("train_fraction")) {
      c.split.train_fraction = GetNumber(split["train_fraction"], "split.train_fraction");
    }
    if (split.contains("trials")) c.split.trials = GetInt(split["trials"], "split.trials");
  }
  if (doc.contains("eval")) {
    const auto& eval = doc["eval"];
    CheckKeys(eval, {"calibration", "sensitive_as_feature", "skip_undefined_groups"}, "eval");
    if (eval.contains("calibration")) {
      c.eval.calibration = ParseCalibration(GetString(eval["calibration"], "eval.calibration"));
    }
    if (eval.contains("sensitive_as_feature")) {
      c.eval.sensitive_as_feature =
          GetBool(eval["sensitive_as_feature"], "eval.sensitive_as_feature");
    }
    if (eval.contains("skip_undefined_groups")) {
      c.eval.skip_undefined_groups =
          GetBool(eval["skip_undefined_groups"], "eval.skip_undefined_groups");
    }
  }
  if (doc.contains("training")) {
    const auto& t = doc["training"];
    CheckKeys(t, {"learning_rate", "max_epochs", "gradient_tol", "l2"}, "training");
    if (t.contains("learning_rate")) {
      c.training.learning_rate = GetNumber(t["learning_rate"], "training.learning_rate");
    }
    if (t.contains("max_epochs")) {
      c.training.max_epochs = GetInt(t["max_epochs"], "training.max_epochs");
    }
    if (t.contains("gradient_tol")) {
      c.training.gradient_tol = GetNumber(t["gradient_tol"], "training.gradient_tol");
    }
    if (t.contains("l2")) c.training.l2 = GetNumber(t["l2"], "training.l2");
  }
  if (doc.contains("sweep")) {
    const auto& sweep = doc["sweep"];
    CheckKeys(sweep, {"mechanisms", "epsilons"}, "sweep");
    if (sweep.contains("mechanisms")) {
      for (const std::string& name : GetStrings(sweep["mechanisms"], "sweep.mechanisms")) {
        c.sweep_mechanisms.push_back(ParseMechanismKind(name));
      }
    }
    if (sweep.contains("epsilons")) {
      const auto& eps = sweep["epsilons"];
      if (!eps.is_array()) ConfigError("'sweep.epsilons' must be a list of numbers");
      for (const auto& e : eps) c.sweep_epsilons.push_back(GetNumber(e, "sweep.epsilons"));
    }
  }
  c.training.sensitive_as_feature = c.eval.sensitive_as_feature;
  c.Validate();
  return c;
}

Json RunConfigToJson(const RunConfig& config) {
  Json doc;
  doc["mechanism"] = MechanismKindName(config.mechanism);
  doc["epsilon"] = config.epsilon;
  doc["zeta"] = config.zeta ? Json(*config.zeta) : Json(nullptr);
  doc["seed"] = config.seed;
  doc["input"] = config.input;
  Json cols;
  cols["sensitive"] = config.columns.sensitive;
  cols["label"] = config.columns.label;
  cols["positive_label"] = config.columns.positive_label;
  cols["negative_label"] =
      config.columns.negative_label ? Json(*config.columns.negative_label) : Json(nullptr);
  cols["features"] = config.columns.features.empty() ? Json("auto")
                                                     : Json(config.columns.features);
  cols["sensitive_order"] = config.columns.sensitive_order;
  doc["columns"] = std::move(cols);
  doc["split"] = Json{{"train_fraction", config.split.train_fraction},
                      {"trials", config.split.trials}};
  doc["eval"] = Json{{"calibration", CalibrationName(config.eval.calibration)},
                     {"sensitive_as_feature", config.eval.sensitive_as_feature},
                     {"skip_undefined_groups", config.eval.skip_undefined_groups}};
  doc["training"] = Json{{"learning_rate", config.training.learning_rate},
                         {"max_epochs", config.training.max_epochs},
                         {"gradient_tol", config.training.gradient_tol},
                         {"l2", config.training.l2}};
  Json mechanisms = Json::array();
  for (MechanismKind kind : config.sweep_mechanisms) {
    mechanisms.push_back(MechanismKindName(kind));
  }
  doc["sweep"] = Json{{"mechanisms", std::move(mechanisms)},
                      {"epsilons", config.sweep_epsilons}};
  return doc;
}

DesignedMechanism DesignMechanism(MechanismKind kind, const JointDistribution& dist,
                                  double epsilon, std::optional<double> zeta) {
  if (kind != MechanismKind::kNonPrivate && !IsPositiveFinite(epsilon)) {
    throw Error(ErrorCode::kInvalidEpsilon,
                "epsilon must be positive and finite, got " + FormatNumber(epsilon));
  }
  const int k = dist.k();
  const auto require_binary = [&] {
    if (k != 2) {
      throw Error(ErrorCode::kNotBinary, std::string(MechanismKindName(kind)) +
                                             " needs k = 2, data has k = " +
                                             std::to_string(k));
    }
  };
  DesignedMechanism d;
  d.kind = kind;
  d.epsilon = epsilon;
  switch (kind) {
    case MechanismKind::kNonPrivate:
      d.epsilon = kInf;
      d.matrix = MechanismMatrix::Identity(k);
      break;
    case MechanismKind::kRr:
      require_binary();
      d.matrix = MatrixOfBinary(RrMechanism(epsilon));
      break;
    case MechanismKind::kGrr:
      d.matrix = GrrMatrix(k, epsilon);
      break;
    case MechanismKind::kSs:
      d.subset = SsParams(k, epsilon);
      break;
    case MechanismKind::kOptBinary:
      require_binary();
      d.binary = OptBinary(dist, epsilon);
      d.matrix = MatrixOfBinary(d.binary->mechanism);
      break;
    case MechanismKind::kOptKary: {
      if (!zeta) ConfigError("zeta is required for opt_kary");
      SolverConfig solver;
      solver.epsilon = epsilon;
      solver.zeta = *zeta;
      d.kary = SolveOptK(dist, solver);
      d.matrix = d.kary->q;
      break;
    }
  }
  if (d.matrix && std::isfinite(d.epsilon)) {
    const LdpReport ldp = VerifyLdp(*d.matrix, d.epsilon);
    if (!ldp.satisfied) {
      throw Error(ErrorCode::kNumericalFailure,
                  std::string(MechanismKindName(kind)) + " mechanism fails " +
                      FormatNumber(d.epsilon) + "-LDP (column " +
                      std::to_string(ldp.worst_column) + " ratio " +
                      FormatNumber(ldp.worst_ratio) + ")");
    }
  }
  return d;
}

Json DesignedMechanismToJson(const DesignedMechanism& mechanism) {
  Json doc;
  doc["type"] = mechanism.matrix ? "matrix" : "subset_selection";
  doc["name"] = MechanismKindName(mechanism.kind);
  doc["epsilon"] = NumberOrNull(mechanism.epsilon);
  if (mechanism.matrix) {
    const Json matrix = MechanismMatrixToJson(*mechanism.matrix);
    for (const auto& [key, value] : matrix.items()) doc[key] = value;
  } else {
    doc["k"] = mechanism.subset->k;
    doc["omega"] = mechanism.subset->omega;
    doc["p_true"] = mechanism.subset->p_true;
  }
  return doc;
}

DesignedMechanism DesignedMechanismFromJson(const nlohmann::json& doc) {
  const nlohmann::json& m =
      doc.is_object() && doc.contains("mechanism") ? doc["mechanism"] : doc;
  try {
    DesignedMechanism d;
    const std::string type = m.at("type").get<std::string>();
    try {
      d.kind = ParseMechanismKind(m.at("name").get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorCode::kSchemaMismatch, e.what());
    }
    const auto& eps = m.at("epsilon");
    d.epsilon = eps.is_null() ? kInf : eps.get<double>();
    if (type == "matrix") {
      d.matrix = MechanismMatrixFromJson(m);
    } else if (type == "subset_selection") {
      d.subset = SubsetSelectionParams{m.at("k").get<int>(), d.epsilon,
                                       m.at("omega").get<int>(),
                                       m.at("p_true").get<double>()};
    } else {
      throw Error(ErrorCode::kSchemaMismatch, "unknown mechanism type '" + type + "'");
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch,
                std::string("malformed mechanism document: ") + e.what());
  }
}

Split SplitIndices(size_t n, double train_fraction, uint64_t seed) {
  if (n < 2) {
    throw Error(ErrorCode::kEmptyFile, "need at least 2 records to split, have " +
                                           std::to_string(n));
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  SplitMix64 rng = SplitMix64::Stream(seed, kSplitStream);
  for (size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.NextBelow(i + 1)]);
  const size_t n_train = std::clamp<size_t>(
      static_cast<size_t>(std::llround(train_fraction * static_cast<double>(n))), 1, n - 1);
  Split split;
  split.train.assign(order.begin(), order.begin() + n_train);
  split.test.assign(order.begin() + n_train, order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<TrialResult> RunTrials(const RunConfig& config, MechanismKind kind,
                                   double epsilon, const TabularDataset& data) {
  data.Validate();
  std::vector<TrialResult> results(config.split.trials);
  TrainingOptions training = config.training;
  training.sensitive_as_feature = config.eval.sensitive_as_feature;
  const EvaluationOptions evaluation{config.eval.calibration,
                                     config.eval.skip_undefined_groups};
  ParallelFor(results.size(), config.threads, [&](size_t t) {
    const uint64_t trial_seed = config.seed ^ static_cast<uint64_t>(t);
    const Split split = SplitIndices(data.size(), config.split.train_fraction, trial_seed);
    TabularDataset train = Subset(data, split.train);
    const TabularDataset test = Subset(data, split.test);
    if (kind != MechanismKind::kNonPrivate) {
      const DesignedMechanism mechanism =
          DesignMechanism(kind, EstimateDistribution(train), epsilon, config.zeta);
      const uint64_t perturb_seed = Mix64(trial_seed ^ kPerturbSalt);
      train = mechanism.matrix
                  ? PerturbDataset(train, *mechanism.matrix, perturb_seed)
                  : PerturbDatasetSubset(train, *mechanism.subset, perturb_seed);
    }
    LinearClassifier model = TrainLogistic(train, training);
    model.calibration = config.eval.calibration;
    results[t] = {static_cast<int>(t), trial_seed, Evaluate(model, test, evaluation)};
  });
  return results;
}

MetricSummary Summarize(std::vector<double> values) {
  MetricSummary s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stderr_of_mean = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  s.ci_low = s.mean - 1.96 * s.stderr_of_mean;
  s.ci_high = s.mean + 1.96 * s.stderr_of_mean;
  return s;
}

double MetricValue(const FairnessReport& report, const std::string& metric) {
  if (metric == "accuracy") return report.accuracy;
  if (metric == "sp_gap") return report.sp_gap;
  if (metric == "eo_gap") return report.eo_gap;
  if (metric == "meo_gap") return report.meo_gap;
  if (metric == "eod_gap") return report.eod_gap;
  throw Error(ErrorCode::kInvalidArgument, "unknown metric '" + metric + "'");
}

TabularDataset LoadInput(const RunConfig& config) {
  if (config.input.empty()) ConfigError("no input CSV given");
  return IngestCsv(config.input, config.columns);
}

Json DesignReport(const RunConfig& config, const TabularDataset& data) {
  const JointDistribution dist = EstimateDistribution(data);
  const DesignedMechanism mechanism =
      DesignMechanism(config.mechanism, dist, config.epsilon, config.zeta);

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "design";
  report["config"] = RunConfigToJson(config);
  report["input"] = InputJson(data);
  Json distribution = DistributionToJson(dist);
  distribution["delta"] = Delta(dist);
  distribution["delta_prime"] = DeltaPrime(dist);
  report["distribution"] = std::move(distribution);
  report["mechanism"] = DesignedMechanismToJson(mechanism);
  if (mechanism.matrix) {
    const auto [delta, delta_prime] = PredictedUnfairness(dist, *mechanism.matrix);
    report["epsilon_star"] = NumberOrNull(PrivacyLevel(*mechanism.matrix));
    report["predicted"] = Json{{"delta", delta}, {"delta_prime", delta_prime}};
  } else {
    report["epsilon_star"] = mechanism.epsilon;
    report["predicted"] = nullptr;
  }
  report["min_achievable_error"] = MinAchievableError(dist, config.epsilon);
  if (mechanism.binary) report["binary"] = BinaryResultToJson(*mechanism.binary);
  if (mechanism.kary) report["kary"] = KaryResultToJson(*mechanism.kary);

  Json comparison = Json::array();
  std::vector<MechanismKind> baselines = {MechanismKind::kGrr, MechanismKind::kSs};
  if (dist.k() == 2) baselines.insert(baselines.begin(), MechanismKind::kRr);
  for (MechanismKind kind : baselines) {
    const DesignedMechanism baseline = DesignMechanism(kind, dist, config.epsilon, std::nullopt);
    Json entry = DesignedMechanismToJson(baseline);
    if (baseline.matrix) {
      const auto [delta, delta_prime] = PredictedUnfairness(dist, *baseline.matrix);
      entry["predicted"] = Json{{"delta", delta}, {"delta_prime", delta_prime}};
    }
    comparison.push_back(std::move(entry));
  }
  report["comparison"] = std::move(comparison);
  return report;
}

Json CmdDesign(const RunConfig& config) { return DesignReport(config, LoadInput(config)); }

std::string CmdPerturb(const RunConfig& config, const nlohmann::json& mechanism_doc) {
  const DesignedMechanism mechanism = DesignedMechanismFromJson(mechanism_doc);
  if (config.input.empty()) ConfigError("no input CSV given");
  CsvTable table = ReadCsvFile(config.input);
  const int column = table.ColumnIndex(config.columns.sensitive);
  if (column < 0) {
    throw Error(ErrorCode::kMissingColumn,
                "sensitive column '" + config.columns.sensitive + "' not in header");
  }

  // Same value -> index map as ingestion, preferring the order recorded by
  // the design report so indices agree with the mechanism's rows.
  std::vector<std::string> values = config.columns.sensitive_order;
  if (values.empty() && mechanism_doc.is_object() && mechanism_doc.contains("input")) {
    values = mechanism_doc["input"].value("sensitive_values", std::vector<std::string>{});
  }
  const bool fixed_order = !values.empty();
  std::unordered_map<std::string, int> index;
  for (size_t i = 0; i < values.size(); ++i) index.emplace(values[i], static_cast<int>(i));
  TabularDataset data;
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const std::string& cell = table.rows[r][column];
    auto it = index.find(cell);
    if (it == index.end()) {
      if (fixed_order) {
        throw Error(ErrorCode::kUnparseableCell,
                    "row " + std::to_string(r + 1) + ": sensitive value '" + cell +
                        "' is not in the mechanism's alphabet");
      }
      it = index.emplace(cell, static_cast<int>(values.size())).first;
      values.push_back(cell);
    }
    data.sensitive.push_back(it->second);
  }
  data.labels.assign(table.rows.size(), 0);
  data.sensitive_values = values;
  const int mechanism_k = mechanism.matrix ? mechanism.matrix->k() : mechanism.subset->k;
  if (mechanism_k != data.k()) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "mechanism has k = " + std::to_string(mechanism_k) + ", column '" +
                    config.columns.sensitive + "' has " + std::to_string(data.k()) +
                    " values");
  }

  if (mechanism.matrix) {
    const TabularDataset out = PerturbDataset(data, *mechanism.matrix, config.seed,
                                              config.threads);
    for (size_t r = 0; r < table.rows.size(); ++r) {
      table.rows[r][column] = values[out.sensitive[r]];
    }
  } else {
    const TabularDataset out = PerturbDatasetSubset(data, *mechanism.subset, config.seed,
                                                    config.threads);
    const size_t k = values.size();
    std::vector<std::string> names;
    for (const std::string& v : values) names.push_back(config.columns.sensitive + "=" + v);
    table.header.erase(table.header.begin() + column);
    table.header.insert(table.header.begin() + column, names.begin(), names.end());
    for (size_t r = 0; r < table.rows.size(); ++r) {
      std::vector<std::string>& row = table.rows[r];
      row.erase(row.begin() + column);
      std::vector<std::string> bits;
      for (size_t a = 0; a < k; ++a) {
        bits.push_back(out.subset_indicators[r * k + a] ? "1" : "0");
      }
      row.insert(row.begin() + column, bits.begin(), bits.end());
    }
  }
  table.comments.push_back(
      "# fairldp perturb seed=" + std::to_string(config.seed) + " mechanism=" +
      HexDigest(Fnv1a64(DesignedMechanismToJson(mechanism).dump())));
  return FormatCsv(table);
}

EvaluateOutput EvaluateDataset(const RunConfig& config, const TabularDataset& data) {
  const std::vector<TrialResult> trials =
      RunTrials(config, config.mechanism, config.epsilon, data);
  EvaluateOutput out;
  Json& report = out.report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "evaluate";
  report["config"] = RunConfigToJson(config);
  report["input"] = InputJson(data);
  report["mechanism"] = MechanismKindName(config.mechanism);
  report["epsilon"] = config.mechanism == MechanismKind::kNonPrivate
                          ? Json(nullptr)
                          : Json(config.epsilon);
  Json metrics;
  for (const char* metric : kMetricNames) {
    std::vector<double> values;
    for (const TrialResult& t : trials) values.push_back(MetricValue(t.report, metric));
    const MetricSummary s = Summarize(std::move(values));
    metrics[metric] = Json{{"mean", s.mean},
                           {"stderr", s.stderr_of_mean},
                           {"ci_low", s.ci_low},
                           {"ci_high", s.ci_high}};
  }
  report["metrics"] = std::move(metrics);

  CsvTable csv;
  csv.header = {"trial", "seed", "accuracy", "sp_gap", "eo_gap", "meo_gap", "eod_gap",
                "threshold"};
  Json rows = Json::array();
  for (const TrialResult& t : trials) {
    Json row;
    row["trial"] = t.trial;
    row["seed"] = t.seed;
    const Json metrics_row = FairnessReportToJson(t.report);
    for (const auto& [key, value] : metrics_row.items()) row[key] = value;
    rows.push_back(std::move(row));
    csv.rows.push_back({std::to_string(t.trial), std::to_string(t.seed),
                        FormatNumber(t.report.accuracy), FormatNumber(t.report.sp_gap),
                        FormatNumber(t.report.eo_gap), FormatNumber(t.report.meo_gap),
                        FormatNumber(t.report.eod_gap), FormatNumber(t.report.threshold)});
  }
  report["trials"] = std::move(rows);
  out.trials_csv = FormatCsv(csv);
  return out;
}

EvaluateOutput CmdEvaluate(const RunConfig& config) {
  return EvaluateDataset(config, LoadInput(config));
}

std::string SweepDataset(const RunConfig& config, const TabularDataset& data,
                         const std::vector<double>& epsilons) {
  if (epsilons.empty()) ConfigError("sweep needs at least one epsilon");
  for (double e : epsilons) {
    if (!IsPositiveFinite(e)) ConfigError("sweep epsilons must be positive and finite");
  }
  CsvTable table;
  table.header = {"mechanism", "epsilon", "metric", "mean", "ci_low", "ci_high"};
  for (MechanismKind kind : config.SweepMechanisms()) {
    for (double epsilon : epsilons) {
      const std::vector<TrialResult> trials = RunTrials(config, kind, epsilon, data);
      for (const char* metric : kMetricNames) {
        std::vector<double> values;
        for (const TrialResult& t : trials) values.push_back(MetricValue(t.report, metric));
        const MetricSummary s = Summarize(std::move(values));
        table.rows.push_back({MechanismKindName(kind), FormatNumber(epsilon), metric,
                              FormatNumber(s.mean), FormatNumber(s.ci_low),
                              FormatNumber(s.ci_high)});
      }
    }
  }
  return FormatCsv(table);
}

std::string CmdSweep(const RunConfig& config, const std::vector<double>& epsilons) {
  if (epsilons.empty()) ConfigError("sweep needs at least one epsilon");
  return SweepDataset(config, LoadInput(config), epsilons);
}

namespace {

class CheckList {
 public:
  void Add(const std::string& name, bool passed, const std::string& detail) {
    passed_ = passed_ && passed;
    checks_.push_back(Json{{"name", name}, {"passed", passed}, {"detail", detail}});
  }
  bool passed() const { return passed_; }
  Json Take() { return std::move(checks_); }

 private:
  bool passed_ = true;
  Json checks_ = Json::array();
};

bool Close(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol;
}

double NumberOrInf(const nlohmann::json& v) {
  return v.is_null() ? kInf : v.get<double>();
}

void VerifyMechanism(const nlohmann::json& doc, CheckList& checks) {
  DesignedMechanism m;
  try {
    m = DesignedMechanismFromJson(doc);
    checks.Add("parse", true, "");
  } catch (const Error& e) {
    checks.Add("parse", false, e.what());
    return;
  }
  if (m.subset) {
    const SubsetSelectionParams expected = SsParams(m.subset->k, m.epsilon);
    const bool ok = expected.omega == m.subset->omega &&
                    std::abs(expected.p_true - m.subset->p_true) <= kGapTolerance;
    checks.Add("ss_params", ok,
               "omega " + std::to_string(m.subset->omega) + " vs " +
                   std::to_string(expected.omega) + ", p_true " +
                   FormatNumber(m.subset->p_true) + " vs " + FormatNumber(expected.p_true));
    return;
  }
  const MechanismMatrix& q = *m.matrix;
  if (std::isfinite(m.epsilon)) {
    const LdpReport ldp = VerifyLdp(q, m.epsilon);
    checks.Add("ldp", ldp.satisfied,
               "worst column " + std::to_string(ldp.worst_column) + " ratio " +
                   FormatNumber(ldp.worst_ratio) + " at epsilon " + FormatNumber(m.epsilon));
  } else {
    checks.Add("ldp", true, "non-private mechanism, no privacy level declared");
  }
  const auto& mech = doc.contains("mechanism") ? doc["mechanism"] : doc;
  if (mech.contains("epsilon_star")) {
    const double stored = NumberOrInf(mech["epsilon_star"]);
    const double actual = PrivacyLevel(q);
    checks.Add("epsilon_star", Close(stored, actual, kVerifyTolerance),
               "stored " + FormatNumber(stored) + ", recomputed " + FormatNumber(actual));
  }
  double worst_truth = 0.0;
  for (int i = 0; i < q.k(); ++i) {
    for (int j = 0; j < q.k(); ++j) {
      if (i == j) continue;
      worst_truth = std::max(worst_truth, q.at(i, j) - std::min(q.at(i, i), q.at(j, j)));
    }
  }
  checks.Add("truthfulness", worst_truth <= kVerifyTolerance,
             "max q_ij - min(q_ii, q_jj) = " + FormatNumber(worst_truth));
  if (doc.contains("distribution") && doc.contains("predicted") &&
      !doc["predicted"].is_null()) {
    const auto& d = doc["distribution"];
    const JointDistribution dist(d.at("group_probs").get<std::vector<double>>(),
                                 d.at("pos_rates").get<std::vector<double>>(),
                                 d.at("pos_marginal").get<double>());
    const auto [delta, delta_prime] = PredictedUnfairness(dist, q);
    const double stored_delta = doc["predicted"].at("delta").get<double>();
    const double stored_prime = doc["predicted"].at("delta_prime").get<double>();
    checks.Add("predicted_unfairness",
               Close(delta, stored_delta, kVerifyTolerance) &&
                   Close(delta_prime, stored_prime, kVerifyTolerance),
               "delta " + FormatNumber(stored_delta) + " vs " + FormatNumber(delta) +
                   ", delta_prime " + FormatNumber(stored_prime) + " vs " +
                   FormatNumber(delta_prime));
    if (doc.contains("kary")) {
      const double zeta = doc["kary"].at("zeta").get<double>();
      double utility = 0.0;
      for (int i = 0; i < q.k(); ++i) utility += q.at(i, i) * dist.group_prob(i);
      checks.Add("utility", utility >= 1.0 - zeta - kVerifyTolerance,
                 "sum q_ii p_i = " + FormatNumber(utility) + ", required " +
                     FormatNumber(1.0 - zeta));
    }
  }
}

void VerifyEvaluation(const nlohmann::json& doc, CheckList& checks) {
  if (doc.value("schema_version", -1) != kSchemaVersion) {
    checks.Add("schema_version", false,
               "expected " + std::to_string(kSchemaVersion));
    return;
  }
  const bool skip = doc.at("config").at("eval").at("skip_undefined_groups").get<bool>();
  const auto& trials = doc.at("trials");
  double worst = 0.0;
  for (const auto& trial : trials) {
    std::vector<GroupRates> per_group;
    for (const auto& g : trial.at("per_group")) per_group.push_back(GroupRatesFromJson(g));
    const FairnessReport recomputed = GapsFromRates(std::move(per_group), skip);
    for (const char* metric : kMetricNames) {
      if (std::string(metric) == "accuracy") continue;
      worst = std::max(worst, std::abs(MetricValue(recomputed, metric) -
                                       trial.at(metric).get<double>()));
    }
  }
  checks.Add("gaps_from_per_group", worst <= kGapTolerance,
             "max deviation " + FormatNumber(worst) + " over " +
                 std::to_string(trials.size()) + " trials");
  double worst_summary = 0.0;
  for (const char* metric : kMetricNames) {
    std::vector<double> values;
    for (const auto& trial : trials) values.push_back(trial.at(metric).get<double>());
    const MetricSummary s = Summarize(std::move(values));
    const auto& stored = doc.at("metrics").at(metric);
    worst_summary = std::max({worst_summary,
                              std::abs(s.mean - stored.at("mean").get<double>()),
                              std::abs(s.ci_low - stored.at("ci_low").get<double>()),
                              std::abs(s.ci_high - stored.at("ci_high").get<double>())});
  }
  checks.Add("metric_summaries", worst_summary <= kGapTolerance,
             "max deviation " + FormatNumber(worst_summary));
}

}  // namespace

VerifyOutput CmdVerify(const nlohmann::json& mechanism_doc,
                       const nlohmann::json* evaluation_doc) {
  CheckList checks;
  try {
    VerifyMechanism(mechanism_doc, checks);
    if (evaluation_doc) VerifyEvaluation(*evaluation_doc, checks);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("malformed report: ") + e.what());
  }
  VerifyOutput out;
  out.passed = checks.passed();
  out.report["schema_version"] = kSchemaVersion;
  out.report["command"] = "verify";
  out.report["passed"] = out.passed;
  out.report["checks"] = checks.Take();
  return out;
}

}  // namespace fairldp
