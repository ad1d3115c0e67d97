#ifndef PAGECURVE_OUTPUT_HPP
#define PAGECURVE_OUTPUT_HPP

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "pagecurve/errors.hpp"

namespace pagecurve {

inline constexpr const char* kSchemaVersion = "1";

/// Shortest decimal string that parses back to exactly `value`.
inline std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

/// One table cell: a float, an integer, or text (exact rationals travel as "p/q").
using Cell = std::variant<double, std::int64_t, std::string>;

inline std::string cell_text(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

inline nlohmann::json cell_json(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) return format_double(*d);
    return *d;
  }
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  return std::get<std::string>(cell);
}

/// Tabular result of one command with its configuration echo and run metadata.
/// Every row ends with a provenance cell: "analytic", "mc" or "exact".
struct OutputRecord {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
      throw NumericalError("OutputRecord: row width " + std::to_string(row.size()) +
                           " does not match " + std::to_string(columns.size()) + " columns");
    }
    rows.push_back(std::move(row));
  }

  nlohmann::json to_json() const {
    nlohmann::json out;
    out["schema_version"] = kSchemaVersion;
    out["command"] = command;
    out["config"] = config;
    out["metadata"] = metadata;
    out["columns"] = columns;
    nlohmann::json table = nlohmann::json::array();
    for (const auto& row : rows) {
      nlohmann::json line = nlohmann::json::array();
      for (const auto& cell : row) line.push_back(cell_json(cell));
      table.push_back(std::move(line));
    }
    out["rows"] = std::move(table);
    return out;
  }
};

/// CSV with '#'-prefixed metadata lines ahead of the header row.
inline void write_csv(const OutputRecord& record, std::ostream& os) {
  os << "# schema_version=" << kSchemaVersion << '\n';
  os << "# command=" << record.command << '\n';
  for (const auto& [key, value] : record.metadata.items()) {
    os << "# " << key << '=' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
  os << "# config=" << record.config.dump() << '\n';
  for (std::size_t i = 0; i < record.columns.size(); ++i) {
    if (i) os << ',';
    os << record.columns[i];
  }
  os << '\n';
  for (const auto& row : record.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << cell_text(row[i]);
    }
    os << '\n';
  }
}

inline void write_json(const OutputRecord& record, std::ostream& os) {
  os << record.to_json().dump(2) << '\n';
}

}  // namespace pagecurve

#endif  // PAGECURVE_OUTPUT_HPP
