#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pdm::cli {

using Cell = std::variant<double, long long, std::string, bool>;

/// A single table emitted by a CLI subcommand.
struct Dataset {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Free-form key/value notes; part of the JSON document, logged to stderr
  /// alongside CSV output.
  std::vector<std::pair<std::string, std::string>> meta;

  void add_row(std::vector<Cell> row);
};

inline constexpr int kJsonSchemaVersion = 1;

/// Header row then one line per row; doubles with 10 significant digits,
/// strings quoted per RFC 4180 when they contain a comma, quote or newline.
void write_csv(const Dataset& data, std::ostream& out);

/// {"schema": 1, "command", "columns", "rows", "meta"}; doubles with 17
/// significant digits, non-finite values as null.
void write_json(const Dataset& data, std::ostream& out);

std::string format_double(double v, int significant_digits);

}  // namespace pdm::cli
