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

#ifndef FAIRLDP_ERROR_H_
#define FAIRLDP_ERROR_H_

#include <stdexcept>
#include <string>

namespace fairldp {

// Error categories surfaced by the library. The C API maps these one-to-one
// onto fairldp_status values.
enum class ErrorCode {
  kInvalidArgument,
  kInvalidEpsilon,
  kEmptyGroup,
  kNonBinaryLabel,
  kZeroPositiveRate,
  kZeroBaseUnfairness,
  kNotBinary,
  kDegenerateOutput,
  kAlphabetMismatch,
  kInfeasibleBudget,
  kNumericalFailure,
  kTooLarge,
  kSingleClassTrainingSet,
  kNonFiniteLoss,
  kUndefinedRate,
  kSchemaMismatch,
  kMissingColumn,
  kUnparseableCell,
  kEmptyFile,
  kIo,
  kConfig,
  kUndefinedMetric,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fairldp

#endif  // FAIRLDP_ERROR_H_
