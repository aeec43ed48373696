// Copyright 2026 The SOL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sol {

/// Header row plus data rows of string cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws DataError if absent.
  std::size_t column(std::string_view name) const;
};

/// RFC 4180 reader: comma separated, optional double-quoted fields with ""
/// escapes and embedded line breaks, LF or CRLF records. Throws DataError
/// naming the record and field on malformed input or ragged rows.
CsvTable parse_csv(std::istream& in);
CsvTable read_csv_file(const std::filesystem::path& path);

/// Quotes a field only when it contains a comma, quote or line break.
std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, std::span<const std::string> fields);
void write_csv(std::ostream& out, const CsvTable& table);

/// Shortest decimal form that parses back to the same double.
std::string format_number(double value);
/// Parses a whole field as a finite double. Leading/trailing blanks allowed.
bool parse_number(std::string_view text, double& value);

}  // namespace sol
