// Copyright 2026 The corerank Authors
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

#ifndef CORERANK_CSV_IO_HPP_
#define CORERANK_CSV_IO_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "corerank/types.hpp"

namespace corerank {

// Numeric CSV grids. Parsing is locale-independent with '.' as the decimal
// separator; ragged rows and unparseable cells are rejected with the 1-based
// line and column. An empty input yields a 0x0 matrix.
Matrix ParseNumericCsv(std::string_view text, bool has_header,
                       const std::string& source = "<input>");
Matrix ReadNumericCsv(const std::string& path, bool has_header = false);
void WriteNumericCsv(const std::string& path, const Matrix& values);

// Shortest decimal representation that round-trips to the same double.
std::string FormatDouble(double value);

// A headered CSV table of raw string cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column position by name, or -1.
  int Column(std::string_view name) const;
};

CsvTable ReadCsvTable(const std::string& path);
double ParseDouble(std::string_view cell, const std::string& where);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace corerank

#endif  // CORERANK_CSV_IO_HPP_
