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

#include "fairldp/json_io.h"

#include <charconv>
#include <cmath>
#include <limits>

#include "fairldp/csv.h"
#include "fairldp/error.h"

namespace fairldp {

Json NumberOrNull(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

Json MechanismMatrixToJson(const MechanismMatrix& q) {
  Json entries = Json::array();
  for (int i = 0; i < q.k(); ++i) {
    Json row = Json::array();
    for (double v : q.row(i)) row.push_back(v);
    entries.push_back(std::move(row));
  }
  Json doc;
  doc["k"] = q.k();
  doc["entries"] = std::move(entries);
  doc["epsilon_star"] = NumberOrNull(PrivacyLevel(q));
  return doc;
}

MechanismMatrix MechanismMatrixFromJson(const nlohmann::json& doc) {
  try {
    const int k = doc.at("k").get<int>();
    const auto& rows = doc.at("entries");
    if (k < 2 || !rows.is_array() || rows.size() != static_cast<size_t>(k)) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "mechanism needs k >= 2 and k rows of entries");
    }
    std::vector<double> entries;
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != static_cast<size_t>(k)) {
        throw Error(ErrorCode::kSchemaMismatch, "mechanism row is not length k");
      }
      for (const auto& v : row) entries.push_back(v.get<double>());
    }
    return MechanismMatrix(k, std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch,
                std::string("malformed mechanism: ") + e.what());
  }
}

Json SubsetReportToJson(const SubsetReport& report) {
  return Json(report.members);
}

Json BinaryResultToJson(const BinaryDesignResult& result) {
  Json doc;
  doc["p"] = result.mechanism.p;
  doc["q"] = result.mechanism.q;
  doc["epsilon"] = result.epsilon;
  doc["objective"] = result.objective;
  doc["case"] = BinaryCaseName(result.case_taken);
  return doc;
}

Json KaryResultToJson(const KaryDesignResult& result) {
  Json doc;
  doc["k"] = result.q.k();
  doc["epsilon"] = result.epsilon;
  doc["zeta"] = result.zeta;
  doc["objective"] = result.objective;
  doc["entries"] = MechanismMatrixToJson(result.q)["entries"];
  const Certificate& cert = result.certificate;
  Json slacks = Json::array();
  for (const RowSlack& s : cert.slacks) {
    slacks.push_back(Json{{"kind", RowKindName(s.kind)}, {"slack", s.slack}});
  }
  doc["certificate"] = Json{{"iterations", cert.iterations},
                            {"lo", cert.lo},
                            {"hi", cert.hi},
                            {"min_ldp_slack", cert.min_ldp_slack},
                            {"utility", cert.utility},
                            {"slacks", std::move(slacks)}};
  return doc;
}

Json DistributionToJson(const JointDistribution& dist) {
  Json doc;
  doc["k"] = dist.k();
  doc["group_probs"] = std::vector<double>(dist.group_probs().begin(),
                                           dist.group_probs().end());
  doc["pos_rates"] = std::vector<double>(dist.pos_rates().begin(),
                                         dist.pos_rates().end());
  doc["pos_marginal"] = dist.pos_marginal();
  return doc;
}

Json GroupRatesToJson(const GroupRates& rates) {
  Json doc;
  doc["group"] = rates.group;
  doc["count"] = rates.count;
  doc["positives"] = rates.positives;
  doc["negatives"] = rates.negatives;
  doc["positive_prediction_rate"] = NumberOrNull(rates.positive_prediction_rate);
  doc["tpr"] = NumberOrNull(rates.tpr);
  doc["fpr"] = NumberOrNull(rates.fpr);
  return doc;
}

GroupRates GroupRatesFromJson(const nlohmann::json& doc) {
  const auto rate = [&](const char* key) {
    const auto& v = doc.at(key);
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  try {
    return {doc.at("group").get<int>(),
            doc.at("count").get<size_t>(),
            doc.at("positives").get<size_t>(),
            doc.at("negatives").get<size_t>(),
            rate("positive_prediction_rate"),
            rate("tpr"),
            rate("fpr")};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch,
                std::string("malformed per-group row: ") + e.what());
  }
}

Json FairnessReportToJson(const FairnessReport& report) {
  Json doc;
  doc["accuracy"] = report.accuracy;
  doc["sp_gap"] = report.sp_gap;
  doc["eo_gap"] = report.eo_gap;
  doc["meo_gap"] = report.meo_gap;
  doc["eod_gap"] = report.eod_gap;
  doc["threshold"] = report.threshold;
  Json groups = Json::array();
  for (const GroupRates& g : report.per_group) groups.push_back(GroupRatesToJson(g));
  doc["per_group"] = std::move(groups);
  doc["skipped_groups"] = report.skipped_groups;
  return doc;
}

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string GroupRatesCsv(const std::vector<GroupRates>& per_group) {
  CsvTable table;
  table.header = {"group", "count", "positives", "negatives",
                  "positive_prediction_rate", "tpr", "fpr"};
  for (const GroupRates& g : per_group) {
    table.rows.push_back({std::to_string(g.group), std::to_string(g.count),
                          std::to_string(g.positives), std::to_string(g.negatives),
                          FormatNumber(g.positive_prediction_rate),
                          FormatNumber(g.tpr), FormatNumber(g.fpr)});
  }
  return FormatCsv(table);
}

}  // namespace fairldp
