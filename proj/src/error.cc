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

#include "fairldp/error.h"

namespace fairldp {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kNonBinaryLabel: return "NonBinaryLabel";
    case ErrorCode::kZeroPositiveRate: return "ZeroPositiveRate";
    case ErrorCode::kZeroBaseUnfairness: return "ZeroBaseUnfairness";
    case ErrorCode::kNotBinary: return "NotBinary";
    case ErrorCode::kDegenerateOutput: return "DegenerateOutput";
    case ErrorCode::kAlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::kInfeasibleBudget: return "InfeasibleBudget";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kSingleClassTrainingSet: return "SingleClassTrainingSet";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kUndefinedRate: return "UndefinedRate";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kUnparseableCell: return "UnparseableCell";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kUndefinedMetric: return "UndefinedMetric";
  }
  return "Unknown";
}

}  // namespace fairldp
