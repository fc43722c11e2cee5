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

#ifndef FAIRLDP_DATASET_H_
#define FAIRLDP_DATASET_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairldp/csv.h"

namespace fairldp {

struct FeatureColumn {
  std::string name;
  std::vector<double> values;
};

// Where a dataset came from: the source path and a hash of the ingestion
// configuration, so two runs on the same bytes can be told apart from runs
// with different column choices.
struct Provenance {
  std::string source_path;
  std::string config_hash;
};

// How the sensitive attribute of each record is stored. Subset indicators
// appear only after subset-selection perturbation.
enum class SensitiveEncoding { kIndex, kSubsetIndicators };

// Records (x_i, a_i, y_i) with a_i in [0, k) and y_i in {0, 1}.
struct TabularDataset {
  std::vector<FeatureColumn> features;
  SensitiveEncoding encoding = SensitiveEncoding::kIndex;
  // Valid when encoding == kIndex.
  std::vector<int> sensitive;
  // Valid when encoding == kSubsetIndicators: row-major n x k, 0/1 entries.
  std::vector<uint8_t> subset_indicators;
  // sensitive_values[i] is the original literal mapped to index i.
  std::vector<std::string> sensitive_values;
  std::vector<int> labels;
  Provenance provenance;

  size_t size() const { return labels.size(); }
  int k() const { return static_cast<int>(sensitive_values.size()); }

  // Throws kSchemaMismatch when columns disagree in length or an index is out
  // of range, kNonBinaryLabel when a label is outside {0, 1}.
  void Validate() const;
};

struct ColumnsConfig {
  std::string sensitive;
  std::string label;
  std::string positive_label = "1";
  // When unset, the first non-positive literal seen becomes the negative
  // label and any third literal is rejected.
  std::optional<std::string> negative_label;
  // Empty means "auto": every column other than sensitive and label.
  std::vector<std::string> features;
  // Explicit value -> index order; empty means first-appearance order.
  std::vector<std::string> sensitive_order;
};

// Canonical JSON text of the config; hashed into Provenance::config_hash.
std::string ColumnsConfigJson(const ColumnsConfig& config);

// Maps a parsed table onto a dataset. Numeric feature columns are kept as is;
// any column with a non-numeric cell is one-hot encoded as "name=value"
// columns in first-appearance order.
TabularDataset IngestTable(const CsvTable& table, const ColumnsConfig& config,
                           const std::string& source_path = "");

TabularDataset IngestCsv(const std::string& path, const ColumnsConfig& config);

// Selects the given record indices, preserving order.
TabularDataset Subset(const TabularDataset& dataset,
                      const std::vector<size_t>& indices);

}  // namespace fairldp

#endif  // FAIRLDP_DATASET_H_
