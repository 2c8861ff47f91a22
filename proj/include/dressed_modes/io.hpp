#pragma once

// Deterministic CSV and JSON emission. Numbers are printed with 12
// significant digits in the C locale; lines end in '\n'.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dressed_modes/errors.hpp"

namespace dressed_modes {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

struct CsvSchema {
  std::vector<std::string> columns;
};

using CsvRow = std::vector<double>;

inline std::string csv_string(const CsvSchema& schema, const std::vector<CsvRow>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < schema.columns.size(); ++i) {
    out << (i ? "," : "") << schema.columns[i];
  }
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != schema.columns.size()) {
      throw PreconditionError("CSV row " + std::to_string(r) + " has " +
                              std::to_string(rows[r].size()) + " fields, schema has " +
                              std::to_string(schema.columns.size()));
    }
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      out << (i ? "," : "") << format_number(rows[r][i]);
    }
    out << '\n';
  }
  return out.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!f) throw Error("write failed: " + path);
}

inline void emit_csv(const std::string& path, const CsvSchema& schema,
                     const std::vector<CsvRow>& rows) {
  write_text(path, csv_string(schema, rows));
}

/// Run record written next to each output file as <output>.manifest.json.
struct RunManifest {
  std::string subcommand;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;

  nlohmann::json to_json() const {
    return {{"subcommand", subcommand}, {"config", config}, {"outputs", outputs},
            {"seed", seed}, {"tool_version", tool_version}};
  }
};

inline std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace dressed_modes
