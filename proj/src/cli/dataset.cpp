#include "pdm/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <type_traits>

#include "json.hpp"

#include "pdm/error.hpp"

namespace pdm::cli {

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string csv_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_double(v, 10);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return csv_quote(v);
      },
      c);
}

std::string json_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return std::isfinite(v) ? format_double(v, 17) : "null";
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return json_string(v);
        }
      },
      c);
}

}  // namespace

void Dataset::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw Error("Dataset: row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_double(double v, int significant_digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, v);
  return buf;
}

void write_csv(const Dataset& data, std::ostream& out) {
  for (std::size_t i = 0; i < data.columns.size(); ++i) {
    out << (i ? "," : "") << csv_quote(data.columns[i]);
  }
  out << "\r\n";
  for (const auto& row : data.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << "\r\n";
  }
}

void write_json(const Dataset& data, std::ostream& out) {
  out << "{\n  \"schema\": " << kJsonSchemaVersion << ",\n  \"command\": " << json_string(data.command)
      << ",\n  \"columns\": [";
  for (std::size_t i = 0; i < data.columns.size(); ++i) {
    out << (i ? ", " : "") << json_string(data.columns[i]);
  }
  out << "],\n  \"rows\": [";
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    out << (r ? ",\n    [" : "\n    [");
    for (std::size_t i = 0; i < data.rows[r].size(); ++i) {
      out << (i ? ", " : "") << json_cell(data.rows[r][i]);
    }
    out << "]";
  }
  out << (data.rows.empty() ? "],\n" : "\n  ],\n") << "  \"meta\": {";
  for (std::size_t i = 0; i < data.meta.size(); ++i) {
    out << (i ? ", " : "") << json_string(data.meta[i].first) << ": "
        << json_string(data.meta[i].second);
  }
  out << "}\n}\n";
}

}  // namespace pdm::cli
