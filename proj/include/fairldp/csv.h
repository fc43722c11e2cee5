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

#ifndef FAIRLDP_CSV_H_
#define FAIRLDP_CSV_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fairldp {

// A raw CSV table: one header row plus string cells. Leading lines starting
// with '#' are kept in `comments` and are not part of the data.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of `name` in the header, or -1.
  int ColumnIndex(std::string_view name) const;
};

CsvTable ParseCsv(std::string_view text);
CsvTable ReadCsvFile(const std::string& path);

// Writes RFC 4180 CSV with '\n' line endings. Cells are quoted only when
// they contain a separator, quote or line break.
std::string FormatCsv(const CsvTable& table);
void WriteTextFile(const std::string& path, std::string_view contents);
std::string ReadTextFile(const std::string& path);

// 64-bit FNV-1a, used for provenance and mechanism fingerprints.
uint64_t Fnv1a64(std::string_view data);
std::string HexDigest(uint64_t value);

}  // namespace fairldp

#endif  // FAIRLDP_CSV_H_
