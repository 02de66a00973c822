// Copyright 2026 The curaudit Authors
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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace curaudit {

struct CsvRow {
  int line = 0;  // 1-based line of the row's first character
  std::vector<std::string> fields;
};

// RFC 4180-ish parser: quoted fields, doubled quotes, LF or CRLF endings.
// Blank lines and lines starting with '#' (outside quotes) are skipped.
inline std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::size_t i = 0;
  int line = 1;
  while (i < text.size()) {
    if (text[i] == '\n') { ++line; ++i; continue; }
    if (text[i] == '\r') { ++i; continue; }
    if (text[i] == '#') {  // comment line
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    CsvRow row;
    row.line = line;
    std::string field;
    bool quoted = false;
    bool done = false;
    while (i < text.size() && !done) {
      char c = text[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') { field += '"'; i += 2; }
          else { quoted = false; ++i; }
        } else {
          if (c == '\n') ++line;
          field += c;
          ++i;
        }
      } else {
        switch (c) {
          case '"': quoted = true; ++i; break;
          case ',': row.fields.push_back(std::move(field)); field.clear(); ++i; break;
          case '\r': ++i; break;
          case '\n': done = true; ++line; ++i; break;
          default: field += c; ++i; break;
        }
      }
    }
    row.fields.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string csv_escape(std::string_view field) {
  bool needs_quote = field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quote) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

inline std::string csv_join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  out += '\n';
  return out;
}

}  // namespace curaudit
