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

#include "corerank/csv_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace corerank {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  // Drop trailing blank lines.
  while (!lines.empty() && Trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> SplitCells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(Trim(line.substr(start)));
      break;
    }
    cells.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

}  // namespace

double ParseDouble(std::string_view cell, const std::string& where) {
  cell = Trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
    throw ValidationError("unparseable number '" + std::string(cell) + "' at " +
                          where);
  }
  return value;
}

Matrix ParseNumericCsv(std::string_view text, bool has_header,
                       const std::string& source) {
  auto lines = SplitLines(text);
  std::size_t first = 0;
  if (has_header && !lines.empty()) first = 1;

  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  for (std::size_t li = first; li < lines.size(); ++li) {
    if (Trim(lines[li]).empty()) {
      throw ValidationError(source + ": blank line " + std::to_string(li + 1));
    }
    const auto cells = SplitCells(lines[li]);
    if (rows.empty()) {
      width = cells.size();
    } else if (cells.size() != width) {
      throw ValidationError(source + ": ragged row at line " +
                            std::to_string(li + 1) + " (expected " +
                            std::to_string(width) + " columns, found " +
                            std::to_string(cells.size()) + ")");
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      row[c] = ParseDouble(cells[c], source + " line " + std::to_string(li + 1) +
                                         " column " + std::to_string(c + 1));
    }
    rows.push_back(std::move(row));
  }

  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) out(r, c) = rows[r][c];
  }
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << contents;
}

Matrix ReadNumericCsv(const std::string& path, bool has_header) {
  return ParseNumericCsv(ReadFile(path), has_header, path);
}

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void WriteNumericCsv(const std::string& path, const Matrix& values) {
  std::string text;
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) {
      if (c) text += ',';
      text += FormatDouble(values(r, c));
    }
    text += '\n';
  }
  WriteFile(path, text);
}

int CsvTable::Column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable ReadCsvTable(const std::string& path) {
  const std::string text = ReadFile(path);
  const auto lines = SplitLines(text);
  CsvTable table;
  if (lines.empty()) return table;
  for (auto cell : SplitCells(lines[0])) table.header.emplace_back(cell);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto cells = SplitCells(lines[li]);
    if (cells.size() != table.header.size()) {
      throw ValidationError(path + ": ragged row at line " +
                            std::to_string(li + 1));
    }
    std::vector<std::string> row;
    for (auto cell : cells) row.emplace_back(cell);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace corerank
