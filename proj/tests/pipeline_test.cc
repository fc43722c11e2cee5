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

#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <unistd.h>
#include <string>
#include <vector>

#include "fairldp/csv.h"
#include "fairldp/error.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fairldp {
namespace {

const std::string kTestdata = FAIRLDP_TESTDATA_DIR;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

RunConfig Parse(const std::string& text) { return ParseRunConfig(nlohmann::json::parse(text)); }

RunConfig FixtureConfig(const std::string& file, const std::string& sensitive) {
  RunConfig c;
  c.input = kTestdata + "/" + file;
  c.columns.sensitive = sensitive;
  c.columns.label = "label";
  c.seed = 11;
  c.split.trials = 3;
  return c;
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          ("fairldp_pipeline_" + std::to_string(::getpid()) + "_" + name))
      .string();
}

// Writes the planted generator's records as a CSV with columns
// x0..x2, group, label.
std::string WritePlantedCsv(const std::string& name, size_t n, uint64_t seed) {
  const TabularDataset d = testing::PlantedGenerator().Sample(n, seed);
  CsvTable t;
  t.header = {"x0", "x1", "x2", "group", "label"};
  for (size_t r = 0; r < n; ++r) {
    std::vector<std::string> row;
    for (const FeatureColumn& f : d.features) row.push_back(FormatNumber(f.values[r]));
    row.push_back(d.sensitive_values[d.sensitive[r]]);
    row.push_back(std::to_string(d.labels[r]));
    t.rows.push_back(std::move(row));
  }
  const std::string path = TempPath(name);
  WriteTextFile(path, FormatCsv(t));
  return path;
}

TEST(RunConfigTest, ParsesAndEchoes) {
  const RunConfig c = Parse(R"({
    "mechanism": "opt_kary", "epsilon": 2, "zeta": 0.4, "seed": 18446744073709551615,
    "input": "data.csv",
    "columns": {"sensitive": "race", "label": "y", "positive_label": "yes",
                "negative_label": "no", "features": ["a", "b"], "sensitive_order": ["p", "q"]},
    "split": {"train_fraction": 0.75, "trials": 5},
    "eval": {"calibration": "base_rate_match", "sensitive_as_feature": false,
             "skip_undefined_groups": true},
    "training": {"learning_rate": 0.1, "max_epochs": 10, "gradient_tol": 1e-4, "l2": 0.01},
    "sweep": {"mechanisms": ["grr", "opt_kary"], "epsilons": [0.5, 1]},
    "threads": 4})");
  EXPECT_EQ(c.mechanism, MechanismKind::kOptKary);
  EXPECT_EQ(c.seed, UINT64_MAX);
  EXPECT_EQ(*c.zeta, 0.4);
  EXPECT_EQ(*c.columns.negative_label, "no");
  EXPECT_EQ(c.eval.calibration, Calibration::kBaseRateMatch);
  EXPECT_FALSE(c.training.sensitive_as_feature);
  EXPECT_EQ(c.sweep_mechanisms.size(), 2u);
  EXPECT_EQ(c.threads, 4);
  // The echo parses back to the same echo; threads are not echoed.
  const Json echo = RunConfigToJson(c);
  EXPECT_FALSE(echo.contains("threads"));
  EXPECT_EQ(RunConfigToJson(ParseRunConfig(nlohmann::json::parse(echo.dump()))).dump(),
            echo.dump());
}

TEST(RunConfigTest, Rejections) {
  const std::string cols = R"("columns": {"sensitive": "s", "label": "y"})";
  EXPECT_NO_THROW(Parse("{" + cols + "}"));
  for (const char* bad : {
           R"("bogus": 1)",
           R"("epsilon": "one")",
           R"("epsilon": 0)",
           R"("epsilon": -1)",
           R"("seed": -3)",
           R"("seed": 1.5)",
           R"("mechanism": "grr", "zeta": 0.3)",
           R"("mechanism": "opt_kary")",
           R"("mechanism": "opt_kary", "zeta": 1.5)",
           R"("split": {"train_fraction": 1.0})",
           R"("split": {"train_fraction": 0})",
           R"("split": {"trials": 0})",
           R"("split": {"folds": 3})",
           R"("threads": 0)",
           R"("training": {"max_epochs": 0})",
           R"("sweep": {"epsilons": [1, -2]})",
           R"("sweep": {"mechanisms": ["opt_kary"]})",
       }) {
    EXPECT_EQ(CodeOf([&] { Parse("{" + cols + ", " + std::string(bad) + "}"); }),
              ErrorCode::kConfig)
        << bad;
  }
  EXPECT_EQ(CodeOf([] { Parse(R"({"columns": {"label": "y"}})"); }), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { Parse(R"({"columns": {"sensitive": "s", "label": "y", "x": 1}})"); }),
            ErrorCode::kConfig);
  EXPECT_THROW(Parse("{" + cols + R"(, "mechanism": "laplace"})"), Error);
  EXPECT_THROW(Parse("{" + cols + R"(, "eval": {"calibration": "median"}})"), Error);
}

TEST(MechanismKindTest, Names) {
  for (MechanismKind kind : {MechanismKind::kNonPrivate, MechanismKind::kRr, MechanismKind::kGrr,
                             MechanismKind::kSs, MechanismKind::kOptBinary,
                             MechanismKind::kOptKary}) {
    EXPECT_EQ(ParseMechanismKind(MechanismKindName(kind)), kind);
  }
  EXPECT_STREQ(MechanismKindName(MechanismKind::kNonPrivate), "non_private");
}

TEST(DesignMechanismTest, EveryKindVerifiesAndRoundTrips) {
  const JointDistribution d2 = JointDistribution::FromRates({0.3, 0.7}, {0.2, 0.6});
  const JointDistribution d3 = JointDistribution::FromRates({0.5, 0.3, 0.2}, {0.2, 0.5, 0.8});
  for (MechanismKind kind : {MechanismKind::kNonPrivate, MechanismKind::kRr, MechanismKind::kGrr,
                             MechanismKind::kSs, MechanismKind::kOptBinary,
                             MechanismKind::kOptKary}) {
    const std::optional<double> zeta =
        kind == MechanismKind::kOptKary ? std::optional<double>(0.5) : std::nullopt;
    const DesignedMechanism m = DesignMechanism(kind, d2, 1.0, zeta);
    EXPECT_EQ(m.kind, kind);
    if (m.matrix && kind != MechanismKind::kNonPrivate) {
      EXPECT_TRUE(VerifyLdp(*m.matrix, 1.0).satisfied);
    }
    const Json j = DesignedMechanismToJson(m);
    const DesignedMechanism back = DesignedMechanismFromJson(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(DesignedMechanismToJson(back).dump(), j.dump());
  }
  const DesignedMechanism identity = DesignMechanism(MechanismKind::kNonPrivate, d3, 1.0, {});
  EXPECT_TRUE(std::isinf(identity.epsilon));
  EXPECT_EQ(identity.matrix->at(2, 2), 1.0);
  EXPECT_EQ(CodeOf([&] { DesignMechanism(MechanismKind::kRr, d3, 1.0, {}); }),
            ErrorCode::kNotBinary);
  EXPECT_EQ(CodeOf([&] { DesignMechanism(MechanismKind::kOptBinary, d3, 1.0, {}); }),
            ErrorCode::kNotBinary);
  EXPECT_EQ(CodeOf([] { DesignedMechanismFromJson(nlohmann::json::parse(R"({"type": "tree"})")); }),
            ErrorCode::kSchemaMismatch);
}

TEST(SplitTest, PartitionAndDeterminism) {
  const Split a = SplitIndices(101, 0.8, 5);
  EXPECT_EQ(a.train.size(), 81u);
  EXPECT_EQ(a.test.size(), 20u);
  std::vector<size_t> all = a.train;
  all.insert(all.end(), a.test.begin(), a.test.end());
  std::sort(all.begin(), all.end());
  for (size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
  EXPECT_EQ(SplitIndices(101, 0.8, 5).train, a.train);
  EXPECT_NE(SplitIndices(101, 0.8, 6).train, a.train);
  EXPECT_EQ(SplitIndices(2, 0.99, 1).test.size(), 1u);
  EXPECT_EQ(SplitIndices(5, 0.01, 1).train.size(), 1u);
  EXPECT_EQ(CodeOf([] { SplitIndices(1, 0.5, 1); }), ErrorCode::kEmptyFile);
}

TEST(SummarizeTest, Values) {
  const MetricSummary s = Summarize({0.2, 0.4, 0.6});
  EXPECT_NEAR(s.mean, 0.4, 1e-15);
  EXPECT_NEAR(s.stderr_of_mean, 0.2 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(s.ci_high - s.mean, 1.96 * s.stderr_of_mean, 1e-15);
  const MetricSummary shuffled = Summarize({0.6, 0.2, 0.4});
  EXPECT_EQ(shuffled.mean, s.mean);
  EXPECT_EQ(shuffled.ci_low, s.ci_low);
  const MetricSummary one = Summarize({0.7});
  EXPECT_EQ(one.stderr_of_mean, 0.0);
  EXPECT_EQ(one.ci_low, 0.7);
}

TEST(CmdDesignTest, BinaryFixture) {
  RunConfig c = FixtureConfig("binary_k2.csv", "gender");
  c.epsilon = std::log(2.0);
  const Json r = CmdDesign(c);
  EXPECT_EQ(r["schema_version"], kSchemaVersion);
  EXPECT_EQ(r["command"], "design");
  const double p = r["binary"]["p"].get<double>();
  const double q = r["binary"]["q"].get<double>();
  EXPECT_TRUE(p == 0.75 || q == 0.75);
  EXPECT_EQ(std::min(p, q), 0.5);
  EXPECT_NEAR(r["epsilon_star"].get<double>(), c.epsilon, 1e-12);
  EXPECT_EQ(r["input"]["records"], 200);
  EXPECT_EQ(r["comparison"].size(), 3u);
  EXPECT_TRUE(r.contains("min_achievable_error"));
  // Predicted unfairness follows from the reported distribution.
  EXPECT_NEAR(r["predicted"]["delta_prime"].get<double>(),
              0.3 * r["binary"]["objective"].get<double>(), 1e-12);
}

TEST(CmdDesignTest, AlreadyFairFixtureStaysFair) {
  for (MechanismKind kind : {MechanismKind::kOptBinary, MechanismKind::kRr, MechanismKind::kGrr,
                             MechanismKind::kNonPrivate}) {
    RunConfig c = FixtureConfig("already_fair.csv", "group");
    c.mechanism = kind;
    const Json r = CmdDesign(c);
    EXPECT_EQ(r["predicted"]["delta_prime"].get<double>(), 0.0) << MechanismKindName(kind);
    for (const auto& other : r["comparison"]) {
      if (other["type"] != "matrix") continue;
      EXPECT_EQ(other["predicted"]["delta_prime"].get<double>(), 0.0);
    }
  }
}

TEST(CmdDesignTest, TernaryFixtureMatchesCommittedGrid) {
  const nlohmann::json fixture =
      nlohmann::json::parse(ReadTextFile(kTestdata + "/kary_k3_grid.json"));
  RunConfig c = FixtureConfig(fixture["input"].get<std::string>(),
                              fixture["sensitive"].get<std::string>());
  c.mechanism = MechanismKind::kOptKary;
  c.epsilon = fixture["epsilon"].get<double>();
  c.zeta = fixture["zeta"].get<double>();
  const Json r = CmdDesign(c);
  EXPECT_NEAR(r["kary"]["objective"].get<double>(), fixture["objective"].get<double>(), 2e-3);
  EXPECT_NEAR(r["predicted"]["delta"].get<double>(), r["kary"]["objective"].get<double>(), 1e-8);
  c.zeta = 0.3;
  EXPECT_EQ(CodeOf([&] { CmdDesign(c); }), ErrorCode::kInfeasibleBudget);
}

TEST(CmdPerturbTest, IdentityRoundTripsAndSeedsReproduce) {
  RunConfig c = FixtureConfig("binary_k2.csv", "gender");
  const std::string original = ReadTextFile(c.input);
  const nlohmann::json identity = nlohmann::json::parse(
      R"({"type": "matrix", "name": "non_private", "epsilon": null, "k": 2,
          "entries": [[1, 0], [0, 1]]})");
  const std::string out = CmdPerturb(c, identity);
  ASSERT_EQ(out.rfind("# fairldp perturb seed=11 mechanism=", 0), 0u);
  EXPECT_EQ(out.substr(out.find('\n') + 1), original);

  c.epsilon = 1.0;
  const nlohmann::json design = nlohmann::json::parse(CmdDesign(c).dump());
  const std::string a = CmdPerturb(c, design);
  EXPECT_EQ(CmdPerturb(c, design), a);
  c.threads = 3;
  EXPECT_EQ(CmdPerturb(c, design), a);
  c.seed = 12;
  EXPECT_NE(CmdPerturb(c, design), a);

  // Only the sensitive column changes.
  const CsvTable before = ReadCsvFile(kTestdata + "/binary_k2.csv");
  const CsvTable after = ParseCsv(a);
  ASSERT_EQ(after.rows.size(), before.rows.size());
  for (size_t r = 0; r < before.rows.size(); ++r) {
    for (size_t col = 0; col < before.header.size(); ++col) {
      if (before.header[col] == "gender") continue;
      EXPECT_EQ(after.rows[r][col], before.rows[r][col]);
    }
  }
}

TEST(CmdPerturbTest, SubsetSelectionWritesIndicators) {
  RunConfig c = FixtureConfig("kary_k3.csv", "race");
  c.mechanism = MechanismKind::kSs;
  c.epsilon = 0.5;
  const CsvTable out = ParseCsv(CmdPerturb(c, nlohmann::json::parse(CmdDesign(c).dump())));
  const CsvTable in = ReadCsvFile(c.input);
  ASSERT_EQ(out.header.size(), in.header.size() + 2);
  EXPECT_EQ(out.header[2], "race=" + std::string(in.rows[0][2]));
  const int omega = SsParams(3, 0.5).omega;
  for (const auto& row : out.rows) {
    EXPECT_EQ((row[2] == "1") + (row[3] == "1") + (row[4] == "1"), omega);
  }
}

TEST(CmdPerturbTest, AlphabetMismatch) {
  RunConfig c = FixtureConfig("kary_k3.csv", "race");
  EXPECT_EQ(CodeOf([&] {
              CmdPerturb(c, nlohmann::json::parse(
                                R"({"type": "matrix", "name": "grr", "epsilon": 1, "k": 2,
                                    "entries": [[0.7, 0.3], [0.3, 0.7]]})"));
            }),
            ErrorCode::kAlphabetMismatch);
}

TEST(CmdPerturbTest, GrrMarginalsAtScale) {
  constexpr size_t kRows = 100000;
  CsvTable t;
  t.header = {"x", "s", "label"};
  const char* values[] = {"a", "b", "c"};
  for (size_t r = 0; r < kRows; ++r) {
    t.rows.push_back({"0", values[r % 3], std::to_string(r % 2)});
  }
  const std::string path = TempPath("grr.csv");
  WriteTextFile(path, FormatCsv(t));
  RunConfig c;
  c.input = path;
  c.columns.sensitive = "s";
  c.columns.label = "label";
  c.mechanism = MechanismKind::kGrr;
  c.epsilon = 1.0;
  c.seed = 99;
  const CsvTable out = ParseCsv(CmdPerturb(c, nlohmann::json::parse(CmdDesign(c).dump())));
  std::filesystem::remove(path);
  const double pi = std::exp(1.0) / (std::exp(1.0) + 2.0);
  size_t kept = 0;
  for (size_t r = 0; r < kRows; ++r) kept += out.rows[r][1] == values[r % 3];
  const double sigma = std::sqrt(pi * (1 - pi) / kRows);
  EXPECT_NEAR(static_cast<double>(kept) / kRows, pi, 3 * sigma);
}

TEST(CmdEvaluateTest, SingleTrialEqualsManualRun) {
  RunConfig c = FixtureConfig("binary_k2.csv", "gender");
  c.mechanism = MechanismKind::kNonPrivate;
  c.split.trials = 1;
  const TabularDataset data = LoadInput(c);
  const EvaluateOutput out = EvaluateDataset(c, data);
  const Split split = SplitIndices(data.size(), c.split.train_fraction, c.seed ^ 0);
  const LinearClassifier model = TrainLogistic(Subset(data, split.train), c.training);
  const FairnessReport manual = Evaluate(model, Subset(data, split.test));
  const Json& trial = out.report["trials"][0];
  EXPECT_EQ(trial["accuracy"].get<double>(), manual.accuracy);
  EXPECT_EQ(trial["sp_gap"].get<double>(), manual.sp_gap);
  EXPECT_EQ(trial["eod_gap"].get<double>(), manual.eod_gap);
  EXPECT_EQ(out.report["metrics"]["accuracy"]["mean"].get<double>(), manual.accuracy);
  EXPECT_TRUE(out.report["epsilon"].is_null());
  EXPECT_EQ(out.trials_csv.substr(0, out.trials_csv.find('\n')),
            "trial,seed,accuracy,sp_gap,eo_gap,meo_gap,eod_gap,threshold");
}

TEST(CmdEvaluateTest, SerialAndParallelIdentical) {
  RunConfig c = FixtureConfig("kary_k3.csv", "race");
  c.mechanism = MechanismKind::kGrr;
  c.split.trials = 6;
  const TabularDataset data = LoadInput(c);
  const EvaluateOutput serial = EvaluateDataset(c, data);
  c.threads = 4;
  const EvaluateOutput parallel = EvaluateDataset(c, data);
  EXPECT_EQ(serial.report.dump(), parallel.report.dump());
  EXPECT_EQ(serial.trials_csv, parallel.trials_csv);
}

TEST(CmdEvaluateTest, SubsetSelectionTrainsOnIndicators) {
  RunConfig c = FixtureConfig("kary_k3.csv", "race");
  c.mechanism = MechanismKind::kSs;
  c.split.trials = 2;
  const EvaluateOutput out = EvaluateDataset(c, LoadInput(c));
  EXPECT_EQ(out.report["trials"].size(), 2u);
  EXPECT_EQ(out.report["mechanism"], "ss");
}

TEST(CmdSweepTest, TableStructure) {
  RunConfig c = FixtureConfig("binary_k2.csv", "gender");
  c.sweep_mechanisms = {MechanismKind::kNonPrivate, MechanismKind::kOptBinary,
                        MechanismKind::kRr};
  c.split.trials = 2;
  const std::vector<double> eps = {0.5, 1, 2, 4};
  const TabularDataset data = LoadInput(c);
  const std::string table = SweepDataset(c, data, eps);
  const CsvTable t = ParseCsv(table);
  EXPECT_EQ(t.header, std::vector<std::string>(
                          {"mechanism", "epsilon", "metric", "mean", "ci_low", "ci_high"}));
  ASSERT_EQ(t.rows.size(), 3u * 4u * 5u);
  std::map<std::string, std::string> non_private;
  for (const auto& row : t.rows) {
    if (row[0] != "non_private") continue;
    auto [it, fresh] = non_private.emplace(row[2], row[3]);
    if (fresh) continue;
    EXPECT_EQ(it->second, row[3]) << row[2];
  }
  EXPECT_EQ(non_private.size(), 5u);
  EXPECT_EQ(CodeOf([&] { SweepDataset(c, data, {}); }), ErrorCode::kConfig);
}

TEST(CmdSweepTest, OptGapShrinksWithEpsilonOnPlantedData) {
  RunConfig c;
  c.input = WritePlantedCsv("sweep.csv", 2000, 4);
  c.columns.sensitive = "group";
  c.columns.label = "label";
  c.mechanism = MechanismKind::kOptBinary;
  c.split.trials = 10;
  c.seed = 3;
  const CsvTable t = ParseCsv(SweepDataset(c, LoadInput(c), {0.25, 1, 4}));
  std::filesystem::remove(c.input);
  std::vector<double> sp;
  for (const auto& row : t.rows) {
    if (row[2] == "sp_gap") sp.push_back(std::stod(row[3]));
  }
  ASSERT_EQ(sp.size(), 3u);
  // Weakly decreasing as epsilon decreases, up to Monte Carlo noise.
  EXPECT_LE(sp[0], sp[1] + 0.02);
  EXPECT_LE(sp[1], sp[2] + 0.02);
  EXPECT_LT(sp[0], sp[2]);
}

TEST(CmdVerifyTest, DesignAndEvaluationReports) {
  RunConfig c = FixtureConfig("kary_k3.csv", "race");
  c.mechanism = MechanismKind::kOptKary;
  c.zeta = 0.5;
  const nlohmann::json design = nlohmann::json::parse(CmdDesign(c).dump());
  const nlohmann::json evaluation =
      nlohmann::json::parse(EvaluateDataset(c, LoadInput(c)).report.dump());
  const VerifyOutput ok = CmdVerify(design, &evaluation);
  EXPECT_TRUE(ok.passed) << ok.report.dump(2);
  EXPECT_EQ(ok.report["command"], "verify");

  nlohmann::json leaky = design;
  leaky["mechanism"]["entries"][0] = {0.98, 0.01, 0.01};
  const VerifyOutput bad = CmdVerify(leaky, nullptr);
  EXPECT_FALSE(bad.passed);
  bool ldp_failed = false;
  for (const auto& check : bad.report["checks"]) {
    if (check["name"] == "ldp") ldp_failed = !check["passed"].get<bool>();
  }
  EXPECT_TRUE(ldp_failed);

  nlohmann::json edited = evaluation;
  edited["metrics"]["sp_gap"]["mean"] = 0.0;
  EXPECT_FALSE(CmdVerify(design, &edited).passed);
  edited = evaluation;
  edited["trials"][0]["sp_gap"] = edited["trials"][0]["sp_gap"].get<double>() + 0.1;
  EXPECT_FALSE(CmdVerify(design, &edited).passed);
}

TEST(CmdVerifyTest, SubsetSelection) {
  RunConfig c = FixtureConfig("kary_k3.csv", "race");
  c.mechanism = MechanismKind::kSs;
  nlohmann::json design = nlohmann::json::parse(CmdDesign(c).dump());
  EXPECT_TRUE(CmdVerify(design, nullptr).passed);
  design["mechanism"]["omega"] = 2;
  EXPECT_FALSE(CmdVerify(design, nullptr).passed);
}

TEST(LoadInputTest, RequiresInput) {
  RunConfig c;
  EXPECT_EQ(CodeOf([&] { LoadInput(c); }), ErrorCode::kConfig);
}

}  // namespace
}  // namespace fairldp
