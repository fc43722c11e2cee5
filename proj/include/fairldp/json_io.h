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

#ifndef FAIRLDP_JSON_IO_H_
#define FAIRLDP_JSON_IO_H_

#include <string>
#include <vector>

#include "fairldp/classify.h"
#include "fairldp/mechanisms.h"
#include "fairldp/opt_binary.h"
#include "fairldp/opt_kary.h"
#include "json.hpp"

namespace fairldp {

using Json = nlohmann::ordered_json;

// Version stamped into every report; bumped on incompatible layout changes.
inline constexpr int kSchemaVersion = 1;

// Non-finite values serialize as null.
Json NumberOrNull(double value);

// {"k", "entries": [[...]], "epsilon_star"}.
Json MechanismMatrixToJson(const MechanismMatrix& q);
// Accepts the layout above; epsilon_star is ignored on input. Throws
// kSchemaMismatch on a malformed document.
MechanismMatrix MechanismMatrixFromJson(const nlohmann::json& doc);

Json SubsetReportToJson(const SubsetReport& report);

// {"p", "q", "epsilon", "objective", "case"}.
Json BinaryResultToJson(const BinaryDesignResult& result);

// {"k", "epsilon", "zeta", "objective", "entries", "certificate":
//  {"iterations", "lo", "hi", "min_ldp_slack", "utility", "slacks"}}.
Json KaryResultToJson(const KaryDesignResult& result);

Json DistributionToJson(const JointDistribution& dist);

Json GroupRatesToJson(const GroupRates& rates);
Json FairnessReportToJson(const FairnessReport& report);
// Inverse of GroupRatesToJson; null rates read back as NaN.
GroupRates GroupRatesFromJson(const nlohmann::json& doc);

// Columns: group, count, positives, negatives, positive_prediction_rate,
// tpr, fpr. Undefined rates are empty cells.
std::string GroupRatesCsv(const std::vector<GroupRates>& per_group);

// Shortest text that parses back to the same double.
std::string FormatNumber(double value);

}  // namespace fairldp

#endif  // FAIRLDP_JSON_IO_H_
