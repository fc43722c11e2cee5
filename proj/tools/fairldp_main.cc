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

// Command-line front end. Links only the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairldp/fairldp.h"
#include "json.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 4;

struct Overrides {
  std::string config_path;
  std::string input;
  std::string mechanism;
  std::optional<double> epsilon;
  std::optional<double> zeta;
  std::optional<uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> threads;
  std::optional<double> train_fraction;
  std::string calibration;
  std::string sensitive;
  std::string label;
  std::string positive_label;
  bool skip_undefined_groups = false;
  bool no_sensitive_feature = false;
};

// Adds the flags shared by every data-reading subcommand.
void AddRunOptions(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "Run configuration (JSON)");
  cmd->add_option("-i,--input", o.input, "Input CSV (overrides config.input)");
  cmd->add_option("--mechanism", o.mechanism,
                  "non_private | rr | grr | ss | opt_binary | opt_kary");
  cmd->add_option("--epsilon", o.epsilon, "Privacy level");
  cmd->add_option("--zeta", o.zeta, "Utility slack for opt_kary");
  cmd->add_option("--seed", o.seed, "64-bit seed");
  cmd->add_option("--threads", o.threads, "Worker threads (never changes output)");
  cmd->add_option("--sensitive", o.sensitive, "Sensitive column name");
  cmd->add_option("--label", o.label, "Label column name");
  cmd->add_option("--positive-label", o.positive_label, "Label literal mapped to 1");
}

void AddEvalOptions(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--trials", o.trials, "Number of train/test trials");
  cmd->add_option("--train-fraction", o.train_fraction, "Training share of each split");
  cmd->add_option("--calibration", o.calibration, "fixed | base_rate_match");
  cmd->add_flag("--skip-undefined-groups", o.skip_undefined_groups,
                "Skip groups without positives/negatives instead of failing");
  cmd->add_flag("--no-sensitive-feature", o.no_sensitive_feature,
                "Do not feed the sensitive attribute to the classifier");
}

bool ReadFile(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  out = buffer.str();
  return true;
}

int Emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::fwrite(contents.data(), 1, contents.size(), stdout);
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(contents.data(), static_cast<std::streamsize>(contents.size()))) {
    std::cerr << "fairldp: cannot write '" << path << "'\n";
    return kExitData;
  }
  return 0;
}

// Config file with flag overrides applied; flags win. Returns an exit code
// on failure.
std::optional<std::string> BuildConfig(const Overrides& o, int& exit_code) {
  nlohmann::json config = nlohmann::json::object();
  if (!o.config_path.empty()) {
    std::string text;
    if (!ReadFile(o.config_path, text)) {
      std::cerr << "fairldp: cannot read config '" << o.config_path << "'\n";
      exit_code = kExitConfig;
      return std::nullopt;
    }
    try {
      config = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      std::cerr << "fairldp: config '" << o.config_path << "' is not valid JSON: "
                << e.what() << "\n";
      exit_code = kExitConfig;
      return std::nullopt;
    }
    if (!config.is_object()) {
      std::cerr << "fairldp: config must be a JSON object\n";
      exit_code = kExitConfig;
      return std::nullopt;
    }
  }
  if (!o.input.empty()) config["input"] = o.input;
  if (!o.mechanism.empty()) config["mechanism"] = o.mechanism;
  if (o.epsilon) config["epsilon"] = *o.epsilon;
  if (o.zeta) config["zeta"] = *o.zeta;
  if (o.seed) config["seed"] = *o.seed;
  if (o.threads) config["threads"] = *o.threads;
  if (o.trials) config["split"]["trials"] = *o.trials;
  if (o.train_fraction) config["split"]["train_fraction"] = *o.train_fraction;
  if (!o.calibration.empty()) config["eval"]["calibration"] = o.calibration;
  if (o.skip_undefined_groups) config["eval"]["skip_undefined_groups"] = true;
  if (o.no_sensitive_feature) config["eval"]["sensitive_as_feature"] = false;
  if (!o.sensitive.empty()) config["columns"]["sensitive"] = o.sensitive;
  if (!o.label.empty()) config["columns"]["label"] = o.label;
  if (!o.positive_label.empty()) config["columns"]["positive_label"] = o.positive_label;
  return config.dump();
}

int Report(fairldp_status status) {
  if (status != FAIRLDP_OK) {
    std::cerr << "fairldp: " << fairldp_last_error() << "\n";
  }
  return fairldp_exit_code(status);
}

// Takes ownership of a library string.
std::string Adopt(char* s) {
  std::string out = s ? s : "";
  fairldp_string_free(s);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design and evaluate fairness-optimal LDP mechanisms"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fairldp_version()));

  Overrides o;
  std::string out_path;

  CLI::App* design = app.add_subcommand("design", "Design a mechanism for a dataset");
  AddRunOptions(design, o);
  design->add_option("-o,--out", out_path, "Report path (default stdout)");

  std::string mechanism_path;
  CLI::App* perturb = app.add_subcommand("perturb", "Perturb the sensitive column");
  AddRunOptions(perturb, o);
  perturb->add_option("-m,--mechanism-file", mechanism_path,
                      "Design report or mechanism JSON")->required();
  perturb->add_option("-o,--out", out_path, "Output CSV (default stdout)");

  std::string trials_csv_path;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Train and evaluate over trials");
  AddRunOptions(evaluate, o);
  AddEvalOptions(evaluate, o);
  evaluate->add_option("-o,--out", out_path, "Report path (default stdout)");
  evaluate->add_option("--trials-csv", trials_csv_path, "Optional per-trial CSV");

  std::vector<double> epsilons;
  std::vector<std::string> sweep_mechanisms;
  CLI::App* sweep = app.add_subcommand("sweep", "Evaluate over a list of epsilons");
  AddRunOptions(sweep, o);
  AddEvalOptions(sweep, o);
  sweep->add_option("--epsilons", epsilons, "Epsilon list (overrides sweep.epsilons)")
      ->delimiter(',');
  sweep->add_option("--mechanisms", sweep_mechanisms, "Mechanisms to compare")
      ->delimiter(',');
  sweep->add_option("-o,--out", out_path, "Table path (default stdout)");

  std::string report_path;
  CLI::App* verify = app.add_subcommand("verify", "Re-check a mechanism and report");
  verify->add_option("-m,--mechanism-file", mechanism_path,
                     "Design report or mechanism JSON")->required();
  verify->add_option("-r,--report", report_path, "Evaluation report to re-check");
  verify->add_option("-o,--out", out_path, "Verification report (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (verify->parsed()) {
    std::string mechanism_text, report_text;
    if (!ReadFile(mechanism_path, mechanism_text)) {
      std::cerr << "fairldp: cannot read '" << mechanism_path << "'\n";
      return kExitData;
    }
    if (!report_path.empty() && !ReadFile(report_path, report_text)) {
      std::cerr << "fairldp: cannot read '" << report_path << "'\n";
      return kExitData;
    }
    char* result = nullptr;
    const fairldp_status status = fairldp_verify(
        mechanism_text.c_str(), report_path.empty() ? nullptr : report_text.c_str(), &result);
    if (result != nullptr) {
      const int write_code = Emit(out_path, Adopt(result));
      if (write_code != 0) return write_code;
    }
    return Report(status);
  }

  int exit_code = 0;
  std::optional<std::string> config = BuildConfig(o, exit_code);
  if (!config) return exit_code;

  char* result = nullptr;
  fairldp_status status = FAIRLDP_OK;
  if (design->parsed()) {
    status = fairldp_design(config->c_str(), &result);
  } else if (perturb->parsed()) {
    std::string mechanism_text;
    if (!ReadFile(mechanism_path, mechanism_text)) {
      std::cerr << "fairldp: cannot read '" << mechanism_path << "'\n";
      return kExitData;
    }
    status = fairldp_perturb(config->c_str(), mechanism_text.c_str(), &result);
  } else if (evaluate->parsed()) {
    char* trials_csv = nullptr;
    status = fairldp_evaluate(config->c_str(), &result,
                              trials_csv_path.empty() ? nullptr : &trials_csv);
    if (status == FAIRLDP_OK && !trials_csv_path.empty()) {
      const int write_code = Emit(trials_csv_path, Adopt(trials_csv));
      if (write_code != 0) {
        fairldp_string_free(result);
        return write_code;
      }
    }
  } else if (sweep->parsed()) {
    if (!sweep_mechanisms.empty()) {
      nlohmann::json merged = nlohmann::json::parse(*config);
      merged["sweep"]["mechanisms"] = sweep_mechanisms;
      *config = merged.dump();
    }
    status = fairldp_sweep(config->c_str(), epsilons.data(), epsilons.size(), &result);
  }
  if (status != FAIRLDP_OK) return Report(status);
  return Emit(out_path, Adopt(result));
}
