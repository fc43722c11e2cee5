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

#include "fairldp/csv.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fairldp/error.h"

namespace fairldp {

int CsvTable::ColumnIndex(std::string_view name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

// Splits one logical record starting at `pos`; advances `pos` past the
// record terminator. Quoted fields may span lines.
std::vector<std::string> ParseRecord(std::string_view text, size_t& pos,
                                     size_t line_number) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  while (pos < text.size()) {
    char c = text[pos];
    if (in_quotes) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          pos += 2;
          continue;
        }
        in_quotes = false;
        ++pos;
        continue;
      }
      field.push_back(c);
      ++pos;
      continue;
    }
    if (c == '"' && field.empty() && !field_was_quoted) {
      in_quotes = true;
      field_was_quoted = true;
      ++pos;
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
      ++pos;
      continue;
    }
    if (c == '\r' || c == '\n') {
      ++pos;
      if (c == '\r' && pos < text.size() && text[pos] == '\n') ++pos;
      fields.push_back(std::move(field));
      return fields;
    }
    field.push_back(c);
    ++pos;
  }
  if (in_quotes) {
    throw Error(ErrorCode::kUnparseableCell,
                "unterminated quoted field starting near line " +
                    std::to_string(line_number));
  }
  fields.push_back(std::move(field));
  return fields;
}

bool NeedsQuoting(std::string_view cell) {
  return cell.find_first_of(",\"\r\n") != std::string_view::npos;
}

}  // namespace

CsvTable ParseCsv(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
    text.remove_prefix(3);
  }
  CsvTable table;
  size_t pos = 0;
  size_t line = 1;
  while (pos < text.size() && text[pos] == '#') {
    size_t end = text.find('\n', pos);
    std::string_view comment =
        text.substr(pos, end == std::string_view::npos ? text.size() - pos
                                                       : end - pos);
    if (!comment.empty() && comment.back() == '\r') comment.remove_suffix(1);
    table.comments.emplace_back(comment);
    pos = end == std::string_view::npos ? text.size() : end + 1;
    ++line;
  }
  if (pos >= text.size()) {
    throw Error(ErrorCode::kEmptyFile, "CSV input has no header row");
  }
  table.header = ParseRecord(text, pos, line++);
  while (pos < text.size()) {
    std::vector<std::string> record = ParseRecord(text, pos, line);
    if (record.size() == 1 && record[0].empty()) {
      ++line;
      continue;  // blank line
    }
    if (record.size() != table.header.size()) {
      throw Error(ErrorCode::kUnparseableCell,
                  "line " + std::to_string(line) + " has " +
                      std::to_string(record.size()) + " fields, header has " +
                      std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(record));
    ++line;
  }
  return table;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteTextFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to '" + path + "'");
}

CsvTable ReadCsvFile(const std::string& path) {
  std::string text = ReadTextFile(path);
  if (text.empty()) throw Error(ErrorCode::kEmptyFile, "'" + path + "' is empty");
  return ParseCsv(text);
}

std::string FormatCsv(const CsvTable& table) {
  std::string out;
  auto append_record = [&out](const std::vector<std::string>& record) {
    for (size_t i = 0; i < record.size(); ++i) {
      if (i > 0) out.push_back(',');
      const std::string& cell = record[i];
      if (NeedsQuoting(cell)) {
        out.push_back('"');
        for (char c : cell) {
          if (c == '"') out.push_back('"');
          out.push_back(c);
        }
        out.push_back('"');
      } else {
        out += cell;
      }
    }
    out.push_back('\n');
  };
  for (const std::string& comment : table.comments) {
    out += comment;
    out.push_back('\n');
  }
  append_record(table.header);
  for (const auto& row : table.rows) append_record(row);
  return out;
}

uint64_t Fnv1a64(std::string_view data) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string HexDigest(uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(value));
  return buffer;
}

}  // namespace fairldp
