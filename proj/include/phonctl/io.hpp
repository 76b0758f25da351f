// Copyright 2026 The phonctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

/// @file
/// Versioned CSV tables, the binary Wigner grid format and its JSON sidecar.
///
/// CSV: first line `# schema=<name>/v1`, then a header row, then rows of
/// numbers printed with 17 significant digits.
///
/// Binary grid: magic "PHWG", u32 version (1), u64 rows, u64 cols, f64 eps,
/// f64 t, then rows * cols complex doubles (re, im) in row-major order.
/// All fields little-endian.

#include <bit>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "phonctl/error.hpp"

namespace phonctl::io {

static_assert(std::endian::native == std::endian::little, "binary grid format assumes a little-endian host");

inline constexpr int kSchemaVersion = 1;

struct Table {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw Error(ErrorCode::kSchema, schema + " has no column " + name);
  }
  std::vector<double> values(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
  }
};

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void ensure_parent(const std::filesystem::path& p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

inline std::string to_csv(const Table& t) {
  std::string out = "# schema=" + t.schema + "/v" + std::to_string(kSchemaVersion) + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& r : t.rows) {
    require(r.size() == t.columns.size(), ErrorCode::kSchema, "row width differs from the header");
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_number(r[i]);
    out += "\n";
  }
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  f << text;
  require(static_cast<bool>(f), ErrorCode::kIo, "write failed for " + path.string());
}

inline void write_csv(const std::filesystem::path& path, const Table& t) { write_text(path, to_csv(t)); }

/// Parses a table and checks schema name, version and exact column list.
inline Table parse_csv(const std::string& text, const std::string& schema,
                       const std::vector<std::string>& columns) {
  std::istringstream in(text);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::kSchema, "empty file");
  const std::string prefix = "# schema=";
  require(line.rfind(prefix, 0) == 0, ErrorCode::kSchema, "missing '# schema=' line");
  const std::string tag = line.substr(prefix.size());
  const auto slash = tag.rfind("/v");
  require(slash != std::string::npos, ErrorCode::kSchema, "schema tag lacks a version: " + tag);
  require(tag.substr(0, slash) == schema, ErrorCode::kSchema,
          "expected schema " + schema + ", found " + tag.substr(0, slash));
  require(tag.substr(slash + 2) == std::to_string(kSchemaVersion), ErrorCode::kSchema,
          "unsupported schema version " + tag.substr(slash + 1));

  Table t;
  t.schema = schema;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::kSchema, "missing header row");
  {
    std::istringstream h(line);
    std::string c;
    while (std::getline(h, c, ',')) t.columns.push_back(c);
  }
  require(t.columns == columns, ErrorCode::kSchema, "unexpected columns in " + schema);
  std::size_t lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::istringstream r(line);
    std::string cell;
    while (std::getline(r, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      require(used == cell.size() && !cell.empty(), ErrorCode::kSchema,
              "line " + std::to_string(lineno) + ": not a number: '" + cell + "'");
      row.push_back(v);
    }
    require(row.size() == columns.size(), ErrorCode::kSchema,
            "line " + std::to_string(lineno) + " has " + std::to_string(row.size()) + " fields");
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

inline Table read_csv(const std::filesystem::path& path, const std::string& schema,
                      const std::vector<std::string>& columns) {
  return parse_csv(read_text(path), schema, columns);
}

struct GridHeader {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  double eps = 0.0;
  double t = 0.0;
};

inline void write_grid(const std::filesystem::path& path, const GridHeader& h,
                       const std::vector<std::complex<double>>& values) {
  require(values.size() == h.rows * h.cols, ErrorCode::kSchema, "grid payload size differs from rows * cols");
  ensure_parent(path);
  std::ofstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  const std::uint32_t version = kSchemaVersion;
  f.write("PHWG", 4);
  f.write(reinterpret_cast<const char*>(&version), sizeof version);
  f.write(reinterpret_cast<const char*>(&h.rows), sizeof h.rows);
  f.write(reinterpret_cast<const char*>(&h.cols), sizeof h.cols);
  f.write(reinterpret_cast<const char*>(&h.eps), sizeof h.eps);
  f.write(reinterpret_cast<const char*>(&h.t), sizeof h.t);
  f.write(reinterpret_cast<const char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(std::complex<double>)));
  require(static_cast<bool>(f), ErrorCode::kIo, "write failed for " + path.string());
}

inline std::vector<std::complex<double>> read_grid(const std::filesystem::path& path, GridHeader& h) {
  std::ifstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorCode::kIo, "cannot open " + path.string());
  char magic[4] = {};
  std::uint32_t version = 0;
  f.read(magic, 4);
  f.read(reinterpret_cast<char*>(&version), sizeof version);
  require(static_cast<bool>(f) && std::string(magic, 4) == "PHWG", ErrorCode::kSchema, "not a grid file");
  require(version == kSchemaVersion, ErrorCode::kSchema, "unsupported grid version " + std::to_string(version));
  f.read(reinterpret_cast<char*>(&h.rows), sizeof h.rows);
  f.read(reinterpret_cast<char*>(&h.cols), sizeof h.cols);
  f.read(reinterpret_cast<char*>(&h.eps), sizeof h.eps);
  f.read(reinterpret_cast<char*>(&h.t), sizeof h.t);
  require(static_cast<bool>(f) && h.rows < (1u << 24) && h.cols < (1u << 24), ErrorCode::kSchema,
          "corrupt grid header");
  std::vector<std::complex<double>> values(h.rows * h.cols);
  f.read(reinterpret_cast<char*>(values.data()),
         static_cast<std::streamsize>(values.size() * sizeof(std::complex<double>)));
  require(static_cast<bool>(f), ErrorCode::kSchema, "grid payload truncated");
  require(f.peek() == std::char_traits<char>::eof(), ErrorCode::kSchema, "trailing bytes after grid payload");
  return values;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchema, path.string() + ": " + e.what());
  }
}

}  // namespace phonctl::io
