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

/* C interface to the fairldp library. Every call returns a fairldp_status;
 * on failure the message is available from fairldp_last_error() on the same
 * thread until its next call. Strings returned through char** outputs are
 * owned by the caller and released with fairldp_string_free(). */
#ifndef FAIRLDP_FAIRLDP_H_
#define FAIRLDP_FAIRLDP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(FAIRLDP_BUILDING_LIBRARY)
#define FAIRLDP_API __declspec(dllexport)
#else
#define FAIRLDP_API __declspec(dllimport)
#endif
#else
#define FAIRLDP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fairldp_status {
  FAIRLDP_OK = 0,
  FAIRLDP_VERIFY_FAILED = 1,
  FAIRLDP_INVALID_ARGUMENT,
  FAIRLDP_INVALID_EPSILON,
  FAIRLDP_EMPTY_GROUP,
  FAIRLDP_NON_BINARY_LABEL,
  FAIRLDP_ZERO_POSITIVE_RATE,
  FAIRLDP_ZERO_BASE_UNFAIRNESS,
  FAIRLDP_NOT_BINARY,
  FAIRLDP_DEGENERATE_OUTPUT,
  FAIRLDP_ALPHABET_MISMATCH,
  FAIRLDP_INFEASIBLE_BUDGET,
  FAIRLDP_NUMERICAL_FAILURE,
  FAIRLDP_TOO_LARGE,
  FAIRLDP_SINGLE_CLASS_TRAINING_SET,
  FAIRLDP_NON_FINITE_LOSS,
  FAIRLDP_UNDEFINED_RATE,
  FAIRLDP_SCHEMA_MISMATCH,
  FAIRLDP_MISSING_COLUMN,
  FAIRLDP_UNPARSEABLE_CELL,
  FAIRLDP_EMPTY_FILE,
  FAIRLDP_IO,
  FAIRLDP_CONFIG,
  FAIRLDP_UNDEFINED_METRIC,
  FAIRLDP_INTERNAL
} fairldp_status;

/* Process exit code for a status: 0 ok, 1 verification failed, 2 config
 * error, 3 solver infeasibility or failure, 4 data error, 5 internal. */
FAIRLDP_API int fairldp_exit_code(fairldp_status status);
FAIRLDP_API const char* fairldp_status_name(fairldp_status status);
FAIRLDP_API const char* fairldp_last_error(void);
FAIRLDP_API const char* fairldp_version(void);
FAIRLDP_API void fairldp_string_free(char* s);

/* Pipeline commands. config_json is a run configuration document. */
FAIRLDP_API fairldp_status fairldp_design(const char* config_json, char** report_json);
FAIRLDP_API fairldp_status fairldp_perturb(const char* config_json,
                                           const char* mechanism_json, char** csv);
/* trials_csv may be NULL. */
FAIRLDP_API fairldp_status fairldp_evaluate(const char* config_json,
                                            char** report_json, char** trials_csv);
/* Epsilons come from the config's sweep.epsilons when n_epsilons is 0. */
FAIRLDP_API fairldp_status fairldp_sweep(const char* config_json,
                                         const double* epsilons, size_t n_epsilons,
                                         char** table_csv);
/* evaluation_json may be NULL. Returns FAIRLDP_VERIFY_FAILED, with the
 * report still written, when any check fails. */
FAIRLDP_API fairldp_status fairldp_verify(const char* mechanism_json,
                                          const char* evaluation_json,
                                          char** report_json);

/* Mechanisms. */
typedef struct fairldp_mechanism fairldp_mechanism;

FAIRLDP_API fairldp_status fairldp_mechanism_grr(int k, double epsilon,
                                                 fairldp_mechanism** out);
/* Row-major k x k entries; rows must sum to 1. */
FAIRLDP_API fairldp_status fairldp_mechanism_from_entries(int k, const double* entries,
                                                          fairldp_mechanism** out);
FAIRLDP_API fairldp_status fairldp_mechanism_from_json(const char* json,
                                                       fairldp_mechanism** out);
FAIRLDP_API void fairldp_mechanism_free(fairldp_mechanism* m);
FAIRLDP_API int fairldp_mechanism_k(const fairldp_mechanism* m);
FAIRLDP_API double fairldp_mechanism_entry(const fairldp_mechanism* m, int i, int j);
/* Infinity when some column mixes zero and non-zero entries. */
FAIRLDP_API double fairldp_mechanism_privacy_level(const fairldp_mechanism* m);
FAIRLDP_API fairldp_status fairldp_mechanism_verify_ldp(const fairldp_mechanism* m,
                                                        double epsilon, int* satisfied);
FAIRLDP_API fairldp_status fairldp_mechanism_to_json(const fairldp_mechanism* m,
                                                     char** json);

/* Datasets. */
typedef struct fairldp_dataset fairldp_dataset;

/* columns_json: {"sensitive", "label", "positive_label", ...}. */
FAIRLDP_API fairldp_status fairldp_dataset_load_csv(const char* path,
                                                    const char* columns_json,
                                                    fairldp_dataset** out);
FAIRLDP_API void fairldp_dataset_free(fairldp_dataset* d);
FAIRLDP_API size_t fairldp_dataset_size(const fairldp_dataset* d);
FAIRLDP_API int fairldp_dataset_k(const fairldp_dataset* d);
FAIRLDP_API fairldp_status fairldp_dataset_unfairness(const fairldp_dataset* d,
                                                      double* delta,
                                                      double* delta_prime);
/* Writes a copy with the sensitive column perturbed; `d` is unchanged. */
FAIRLDP_API fairldp_status fairldp_dataset_perturb(const fairldp_dataset* d,
                                                   const fairldp_mechanism* m,
                                                   uint64_t seed, fairldp_dataset** out);
/* Writes group_probs and pos_rates (k entries each) of the empirical
 * distribution. */
FAIRLDP_API fairldp_status fairldp_dataset_distribution(const fairldp_dataset* d,
                                                        double* group_probs,
                                                        double* pos_rates);

/* Binary optimum for a two-group distribution. */
FAIRLDP_API fairldp_status fairldp_opt_binary(const double group_probs[2],
                                              const double pos_rates[2], double epsilon,
                                              double* p, double* q, double* objective);

#ifdef __cplusplus
}
#endif

#endif /* FAIRLDP_FAIRLDP_H_ */
