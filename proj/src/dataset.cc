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

#include "fairldp/dataset.h"

#include <charconv>
#include <cmath>
#include <unordered_map>

#include "fairldp/error.h"
#include "nlohmann/json.hpp"

namespace fairldp {

void TabularDataset::Validate() const {
  const size_t n = labels.size();
  for (const FeatureColumn& column : features) {
    if (column.values.size() != n) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "feature column '" + column.name + "' has " +
                      std::to_string(column.values.size()) + " rows, expected " +
                      std::to_string(n));
    }
  }
  const int groups = k();
  if (encoding == SensitiveEncoding::kIndex) {
    if (sensitive.size() != n) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "sensitive column length differs from label column");
    }
    for (int a : sensitive) {
      if (a < 0 || a >= groups) {
        throw Error(ErrorCode::kSchemaMismatch,
                    "sensitive index " + std::to_string(a) + " outside [0, " +
                        std::to_string(groups) + ")");
      }
    }
  } else {
    if (subset_indicators.size() != n * static_cast<size_t>(groups)) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "subset indicator block is not n x k");
    }
  }
  for (int y : labels) {
    if (y != 0 && y != 1) {
      throw Error(ErrorCode::kNonBinaryLabel,
                  "label value " + std::to_string(y) + " is not in {0, 1}");
    }
  }
}

std::string ColumnsConfigJson(const ColumnsConfig& config) {
  nlohmann::ordered_json j;
  j["sensitive"] = config.sensitive;
  j["label"] = config.label;
  j["positive_label"] = config.positive_label;
  if (config.negative_label) j["negative_label"] = *config.negative_label;
  j["features"] = config.features;
  j["sensitive_order"] = config.sensitive_order;
  return j.dump();
}

namespace {

std::optional<double> ParseNumber(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  // Locale-independent; rejects leading whitespace, '+', hex and inf/nan.
  const char* end = cell.data() + cell.size();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::string CellName(size_t row, const std::string& column) {
  return "row " + std::to_string(row + 1) + ", column '" + column + "'";
}

}  // namespace

TabularDataset IngestTable(const CsvTable& table, const ColumnsConfig& config,
                           const std::string& source_path) {
  if (table.rows.empty()) {
    throw Error(ErrorCode::kEmptyFile, "CSV input has no data rows");
  }
  const int sensitive_col = table.ColumnIndex(config.sensitive);
  if (sensitive_col < 0) {
    throw Error(ErrorCode::kMissingColumn,
                "sensitive column '" + config.sensitive + "' not in header");
  }
  const int label_col = table.ColumnIndex(config.label);
  if (label_col < 0) {
    throw Error(ErrorCode::kMissingColumn,
                "label column '" + config.label + "' not in header");
  }

  std::vector<int> feature_cols;
  if (config.features.empty()) {
    for (size_t c = 0; c < table.header.size(); ++c) {
      if (static_cast<int>(c) != sensitive_col &&
          static_cast<int>(c) != label_col) {
        feature_cols.push_back(static_cast<int>(c));
      }
    }
  } else {
    for (const std::string& name : config.features) {
      int c = table.ColumnIndex(name);
      if (c < 0) {
        throw Error(ErrorCode::kMissingColumn,
                    "feature column '" + name + "' not in header");
      }
      feature_cols.push_back(c);
    }
  }

  TabularDataset dataset;
  const size_t n = table.rows.size();

  // Sensitive attribute.
  std::unordered_map<std::string, int> value_index;
  for (const std::string& value : config.sensitive_order) {
    if (value_index.count(value) == 0) {
      value_index.emplace(value, static_cast<int>(dataset.sensitive_values.size()));
      dataset.sensitive_values.push_back(value);
    }
  }
  const bool fixed_order = !config.sensitive_order.empty();
  dataset.sensitive.reserve(n);
  for (size_t r = 0; r < n; ++r) {
    const std::string& cell = table.rows[r][sensitive_col];
    auto it = value_index.find(cell);
    if (it == value_index.end()) {
      if (fixed_order) {
        throw Error(ErrorCode::kUnparseableCell,
                    CellName(r, config.sensitive) + ": value '" + cell +
                        "' not in the declared sensitive order");
      }
      it = value_index
               .emplace(cell, static_cast<int>(dataset.sensitive_values.size()))
               .first;
      dataset.sensitive_values.push_back(cell);
    }
    dataset.sensitive.push_back(it->second);
  }

  // Label.
  std::optional<std::string> negative = config.negative_label;
  dataset.labels.reserve(n);
  for (size_t r = 0; r < n; ++r) {
    const std::string& cell = table.rows[r][label_col];
    if (cell == config.positive_label) {
      dataset.labels.push_back(1);
      continue;
    }
    if (!negative) negative = cell;
    if (cell != *negative) {
      throw Error(ErrorCode::kNonBinaryLabel,
                  CellName(r, config.label) + ": label literal '" + cell +
                      "' is neither '" + config.positive_label + "' nor '" +
                      *negative + "'");
    }
    dataset.labels.push_back(0);
  }

  // Features.
  for (int c : feature_cols) {
    const std::string& name = table.header[c];
    std::vector<double> numeric;
    numeric.reserve(n);
    bool is_numeric = true;
    for (size_t r = 0; r < n; ++r) {
      const std::string& cell = table.rows[r][c];
      if (cell.empty()) {
        throw Error(ErrorCode::kUnparseableCell,
                    CellName(r, name) + ": empty cell");
      }
      std::optional<double> value = ParseNumber(cell);
      if (!value) {
        is_numeric = false;
        break;
      }
      numeric.push_back(*value);
    }
    if (is_numeric) {
      dataset.features.push_back({name, std::move(numeric)});
      continue;
    }
    std::vector<std::string> categories;
    std::unordered_map<std::string, size_t> category_index;
    for (size_t r = 0; r < n; ++r) {
      const std::string& cell = table.rows[r][c];
      if (category_index.emplace(cell, categories.size()).second) {
        categories.push_back(cell);
      }
    }
    const size_t first = dataset.features.size();
    for (const std::string& category : categories) {
      dataset.features.push_back({name + "=" + category, std::vector<double>(n, 0.0)});
    }
    for (size_t r = 0; r < n; ++r) {
      dataset.features[first + category_index.at(table.rows[r][c])].values[r] = 1.0;
    }
  }

  dataset.provenance.source_path = source_path;
  dataset.provenance.config_hash = HexDigest(Fnv1a64(ColumnsConfigJson(config)));
  dataset.Validate();
  return dataset;
}

TabularDataset IngestCsv(const std::string& path, const ColumnsConfig& config) {
  return IngestTable(ReadCsvFile(path), config, path);
}

TabularDataset Subset(const TabularDataset& dataset,
                      const std::vector<size_t>& indices) {
  TabularDataset out;
  out.encoding = dataset.encoding;
  out.sensitive_values = dataset.sensitive_values;
  out.provenance = dataset.provenance;
  const size_t k = dataset.sensitive_values.size();
  for (const FeatureColumn& column : dataset.features) {
    FeatureColumn selected{column.name, {}};
    selected.values.reserve(indices.size());
    for (size_t i : indices) selected.values.push_back(column.values.at(i));
    out.features.push_back(std::move(selected));
  }
  out.labels.reserve(indices.size());
  for (size_t i : indices) {
    out.labels.push_back(dataset.labels.at(i));
    if (dataset.encoding == SensitiveEncoding::kIndex) {
      out.sensitive.push_back(dataset.sensitive.at(i));
    } else {
      for (size_t a = 0; a < k; ++a) {
        out.subset_indicators.push_back(dataset.subset_indicators.at(i * k + a));
      }
    }
  }
  return out;
}

}  // namespace fairldp
