// Copyright 2026 The natdis Authors
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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "natdis/core/error.hpp"
#include "natdis/core/format.hpp"

namespace natdis::reports {

/// A CSV file in memory. Cells never contain commas or quotes.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  friend bool operator==(const Table&, const Table&) = default;
};

inline std::string to_csv(const Table& t) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

inline Table parse_csv(std::string_view text, std::string_view source = "csv") {
  Table t;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (t.header.empty()) {
      t.header = std::move(cells);
    } else {
      if (cells.size() != t.header.size())
        throw ParseError(std::string(source), line_no, "row has " + std::to_string(cells.size()) + " cells, header has " +
                                                           std::to_string(t.header.size()));
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

inline void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_csv(const std::filesystem::path& path, const Table& t) { write_text(path, to_csv(t)); }

inline Table read_csv(const std::filesystem::path& path) { return parse_csv(read_text(path), path.string()); }

/// Mean and sample standard deviation of every value column across runs.
/// The first `key_columns` columns identify a row; rows are matched by key,
/// listed in first-seen order, and a key missing from a run counts as zero.
inline Table aggregate(const std::vector<Table>& runs, std::size_t key_columns) {
  Table out;
  if (runs.empty()) return out;
  const auto& header = runs.front().header;
  for (const auto& r : runs)
    if (r.header != header) throw ValidationError("cannot aggregate tables with different headers");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i < key_columns) {
      out.header.push_back(header[i]);
    } else {
      out.header.push_back(header[i] + "_mean");
      out.header.push_back(header[i] + "_std");
    }
  }
  const std::size_t values = header.size() - key_columns;
  std::vector<std::vector<std::string>> keys;
  std::map<std::vector<std::string>, std::size_t> index;
  // sums[row][run][col]
  std::vector<std::vector<std::vector<double>>> cells;
  for (std::size_t run = 0; run < runs.size(); ++run) {
    for (const auto& row : runs[run].rows) {
      std::vector<std::string> key(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(key_columns));
      auto [it, fresh] = index.try_emplace(key, keys.size());
      if (fresh) {
        keys.push_back(key);
        cells.emplace_back(runs.size(), std::vector<double>(values, 0.0));
      }
      for (std::size_t c = 0; c < values; ++c) {
        double v = 0.0;
        if (!parse_double(row[key_columns + c], v))
          throw ValidationError("non-numeric cell '" + row[key_columns + c] + "' in column " + header[key_columns + c]);
        cells[it->second][run][c] = v;
      }
    }
  }
  const double n = static_cast<double>(runs.size());
  for (std::size_t k = 0; k < keys.size(); ++k) {
    std::vector<std::string> row = keys[k];
    for (std::size_t c = 0; c < values; ++c) {
      double sum = 0.0;
      for (const auto& run : cells[k]) sum += run[c];
      const double mean = sum / n;
      double ss = 0.0;
      for (const auto& run : cells[k]) ss += (run[c] - mean) * (run[c] - mean);
      const double sd = runs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      row.push_back(format_number(mean));
      row.push_back(format_number(sd));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace natdis::reports
