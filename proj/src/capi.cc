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

#include "fairldp/fairldp.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>

#include "fairldp/dataset.h"
#include "fairldp/distribution.h"
#include "fairldp/error.h"
#include "fairldp/json_io.h"
#include "fairldp/mechanisms.h"
#include "fairldp/opt_binary.h"
#include "fairldp/pipeline.h"

struct fairldp_mechanism {
  fairldp::MechanismMatrix q;
};

struct fairldp_dataset {
  fairldp::TabularDataset data;
};

namespace {

using fairldp::Error;
using fairldp::ErrorCode;

static_assert(FAIRLDP_UNDEFINED_METRIC ==
              FAIRLDP_INVALID_ARGUMENT + static_cast<int>(ErrorCode::kUndefinedMetric));

thread_local std::string last_error;

fairldp_status StatusOf(ErrorCode code) {
  return static_cast<fairldp_status>(FAIRLDP_INVALID_ARGUMENT + static_cast<int>(code));
}

fairldp_status Fail(fairldp_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into statuses.
template <typename Body>
fairldp_status Guard(Body body) {
  last_error.clear();
  try {
    return body();
  } catch (const Error& e) {
    return Fail(StatusOf(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return Fail(FAIRLDP_CONFIG, std::string("ConfigError: invalid JSON: ") + e.what());
  } catch (const std::bad_alloc&) {
    return Fail(FAIRLDP_INTERNAL, "Internal: out of memory");
  } catch (const std::exception& e) {
    return Fail(FAIRLDP_INTERNAL, std::string("Internal: ") + e.what());
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void RequireNonNull(const void* p, const char* what) {
  if (p == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
  }
}

nlohmann::json ParseJson(const char* text, const char* what) {
  RequireNonNull(text, what);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kConfig, std::string(what) + " is not valid JSON: " + e.what());
  }
}

// Documents other than the run config are data: malformed ones are data
// errors rather than config errors.
nlohmann::json ParseDocument(const char* text, const char* what) {
  RequireNonNull(text, what);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kSchemaMismatch,
                std::string(what) + " is not valid JSON: " + e.what());
  }
}

fairldp::RunConfig ParseConfig(const char* config_json) {
  return fairldp::ParseRunConfig(ParseJson(config_json, "config"));
}

}  // namespace

extern "C" {

int fairldp_exit_code(fairldp_status status) {
  switch (status) {
    case FAIRLDP_OK:
      return 0;
    case FAIRLDP_VERIFY_FAILED:
      return 1;
    case FAIRLDP_INVALID_ARGUMENT:
    case FAIRLDP_INVALID_EPSILON:
    case FAIRLDP_TOO_LARGE:
    case FAIRLDP_CONFIG:
      return 2;
    case FAIRLDP_INFEASIBLE_BUDGET:
    case FAIRLDP_NUMERICAL_FAILURE:
      return 3;
    case FAIRLDP_INTERNAL:
      return 5;
    default:
      return 4;
  }
}

const char* fairldp_status_name(fairldp_status status) {
  switch (status) {
    case FAIRLDP_OK:
      return "Ok";
    case FAIRLDP_VERIFY_FAILED:
      return "VerifyFailed";
    case FAIRLDP_INTERNAL:
      return "Internal";
    default:
      if (status >= FAIRLDP_INVALID_ARGUMENT && status <= FAIRLDP_UNDEFINED_METRIC) {
        return fairldp::ErrorCodeName(
            static_cast<ErrorCode>(status - FAIRLDP_INVALID_ARGUMENT));
      }
      return "Unknown";
  }
}

const char* fairldp_last_error(void) { return last_error.c_str(); }

const char* fairldp_version(void) { return "0.1.0"; }

void fairldp_string_free(char* s) { std::free(s); }

fairldp_status fairldp_design(const char* config_json, char** report_json) {
  return Guard([&] {
    RequireNonNull(report_json, "report_json");
    const fairldp::RunConfig config = ParseConfig(config_json);
    *report_json = CopyString(fairldp::CmdDesign(config).dump(2) + "\n");
    return FAIRLDP_OK;
  });
}

fairldp_status fairldp_perturb(const char* config_json, const char* mechanism_json,
                               char** csv) {
  return Guard([&] {
    RequireNonNull(csv, "csv");
    const fairldp::RunConfig config = ParseConfig(config_json);
    const nlohmann::json mechanism = ParseDocument(mechanism_json, "mechanism");
    *csv = CopyString(fairldp::CmdPerturb(config, mechanism));
    return FAIRLDP_OK;
  });
}

fairldp_status fairldp_evaluate(const char* config_json, char** report_json,
                                char** trials_csv) {
  return Guard([&] {
    RequireNonNull(report_json, "report_json");
    const fairldp::RunConfig config = ParseConfig(config_json);
    const fairldp::EvaluateOutput out = fairldp::CmdEvaluate(config);
    char* report = CopyString(out.report.dump(2) + "\n");
    if (trials_csv != nullptr) {
      try {
        *trials_csv = CopyString(out.trials_csv);
      } catch (...) {
        std::free(report);
        throw;
      }
    }
    *report_json = report;
    return FAIRLDP_OK;
  });
}

fairldp_status fairldp_sweep(const char* config_json, const double* epsilons,
                             size_t n_epsilons, char** table_csv) {
  return Guard([&] {
    RequireNonNull(table_csv, "table_csv");
    const fairldp::RunConfig config = ParseConfig(config_json);
    if (n_epsilons > 0) RequireNonNull(epsilons, "epsilons");
    const std::vector<double> list =
        n_epsilons > 0 ? std::vector<double>(epsilons, epsilons + n_epsilons)
                       : config.sweep_epsilons;
    *table_csv = CopyString(fairldp::CmdSweep(config, list));
    return FAIRLDP_OK;
  });
}

fairldp_status fairldp_verify(const char* mechanism_json, const char* evaluation_json,
                              char** report_json) {
  return Guard([&] {
    RequireNonNull(report_json, "report_json");
    const nlohmann::json mechanism = ParseDocument(mechanism_json, "mechanism");
    nlohmann::json evaluation;
    if (evaluation_json != nullptr) evaluation = ParseDocument(evaluation_json, "evaluation");
    const fairldp::VerifyOutput out =
        fairldp::CmdVerify(mechanism, evaluation_json != nullptr ? &evaluation : nullptr);
    *report_json = CopyString(out.report.dump(2) + "\n");
    if (!out.passed) return Fail(FAIRLDP_VERIFY_FAILED, "VerifyFailed: a check failed");
    return FAIRLDP_OK;
  });
}

fairldp_status fairldp_mechanism_grr(int k, double epsilon, fairldp_mechanism** out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    *out = new fairldp_mechanism{fairldp::GrrMatrix(k, epsilon)};
    return FAIRLDP_OK;
  });
}

fairldp_status fairldp_mechanism_from_entries(int k, const double* entries,
                                              fairldp_mechanism** out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    RequireNonNull(entries, "entries");
    if (k < 2) throw Error(ErrorCode::kInvalidArgument, "k must be >= 2");
    const size_t n = static_cast<size_t>(k) * static_cast<size_t>(k);
    *out = new fairldp_mechanism{
        fairldp::MechanismMatrix(k, std::vector<double>(entries, entries + n))};
    return FAIRLDP_OK;
  });
}

fairldp_status fairldp_mechanism_from_json(const char* json, fairldp_mechanism** out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    const nlohmann::json doc = ParseDocument(json, "mechanism");
    if (!doc.contains("type") && !doc.contains("mechanism")) {
      *out = new fairldp_mechanism{fairldp::MechanismMatrixFromJson(doc)};
      return FAIRLDP_OK;
    }
    const fairldp::DesignedMechanism designed = fairldp::DesignedMechanismFromJson(doc);
    if (!designed.matrix) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "subset-selection mechanisms have no matrix form");
    }
    *out = new fairldp_mechanism{*designed.matrix};
    return FAIRLDP_OK;
  });
}

void fairldp_mechanism_free(fairldp_mechanism* m) { delete m; }

int fairldp_mechanism_k(const fairldp_mechanism* m) { return m ? m->q.k() : 0; }

double fairldp_mechanism_entry(const fairldp_mechanism* m, int i, int j) {
  if (m == nullptr || i < 0 || j < 0 || i >= m->q.k() || j >= m->q.k()) return NAN;
  return m->q.at(i, j);
}

double fairldp_mechanism_privacy_level(const fairldp_mechanism* m) {
  return m ? fairldp::PrivacyLevel(m->q) : NAN;
}

fairldp_status fairldp_mechanism_verify_ldp(const fairldp_mechanism* m, double epsilon,
                                            int* satisfied) {
  return Guard([&] {
    RequireNonNull(m, "mechanism");
    RequireNonNull(satisfied, "satisfied");
    *satisfied = fairldp::VerifyLdp(m->q, epsilon).satisfied ? 1 : 0;
    return FAIRLDP_OK;
  });
}

fairldp_status fairldp_mechanism_to_json(const fairldp_mechanism* m, char** json) {
  return Guard([&] {
    RequireNonNull(m, "mechanism");
    RequireNonNull(json, "json");
    *json = CopyString(fairldp::MechanismMatrixToJson(m->q).dump());
    return FAIRLDP_OK;
  });
}

fairldp_status fairldp_dataset_load_csv(const char* path, const char* columns_json,
                                        fairldp_dataset** out) {
  return Guard([&] {
    RequireNonNull(path, "path");
    RequireNonNull(out, "out");
    nlohmann::json config;
    config["columns"] = ParseJson(columns_json, "columns");
    const fairldp::RunConfig parsed = fairldp::ParseRunConfig(config);
    *out = new fairldp_dataset{fairldp::IngestCsv(path, parsed.columns)};
    return FAIRLDP_OK;
  });
}

void fairldp_dataset_free(fairldp_dataset* d) { delete d; }

size_t fairldp_dataset_size(const fairldp_dataset* d) { return d ? d->data.size() : 0; }

int fairldp_dataset_k(const fairldp_dataset* d) { return d ? d->data.k() : 0; }

fairldp_status fairldp_dataset_unfairness(const fairldp_dataset* d, double* delta,
                                          double* delta_prime) {
  return Guard([&] {
    RequireNonNull(d, "dataset");
    const fairldp::JointDistribution dist = fairldp::EstimateDistribution(d->data);
    if (delta != nullptr) *delta = fairldp::Delta(dist);
    if (delta_prime != nullptr) *delta_prime = fairldp::DeltaPrime(dist);
    return FAIRLDP_OK;
  });
}

fairldp_status fairldp_dataset_perturb(const fairldp_dataset* d, const fairldp_mechanism* m,
                                       uint64_t seed, fairldp_dataset** out) {
  return Guard([&] {
    RequireNonNull(d, "dataset");
    RequireNonNull(m, "mechanism");
    RequireNonNull(out, "out");
    *out = new fairldp_dataset{fairldp::PerturbDataset(d->data, m->q, seed)};
    return FAIRLDP_OK;
  });
}

fairldp_status fairldp_dataset_distribution(const fairldp_dataset* d, double* group_probs,
                                            double* pos_rates) {
  return Guard([&] {
    RequireNonNull(d, "dataset");
    RequireNonNull(group_probs, "group_probs");
    RequireNonNull(pos_rates, "pos_rates");
    const fairldp::JointDistribution dist = fairldp::EstimateDistribution(d->data);
    for (int i = 0; i < dist.k(); ++i) {
      group_probs[i] = dist.group_prob(i);
      pos_rates[i] = dist.pos_rate(i);
    }
    return FAIRLDP_OK;
  });
}

fairldp_status fairldp_opt_binary(const double group_probs[2], const double pos_rates[2],
                                  double epsilon, double* p, double* q, double* objective) {
  return Guard([&] {
    RequireNonNull(group_probs, "group_probs");
    RequireNonNull(pos_rates, "pos_rates");
    const fairldp::JointDistribution dist = fairldp::JointDistribution::FromRates(
        {group_probs[0], group_probs[1]}, {pos_rates[0], pos_rates[1]});
    const fairldp::BinaryDesignResult result = fairldp::OptBinary(dist, epsilon);
    if (p != nullptr) *p = result.mechanism.p;
    if (q != nullptr) *q = result.mechanism.q;
    if (objective != nullptr) *objective = result.objective;
    return FAIRLDP_OK;
  });
}

}  // extern "C"
