#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "qcaveat/io.hpp"

namespace qcaveat {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Column-named rows of numbers or strings, assembled in grid order.
class ResultTable {
 public:
  explicit ResultTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

  /// Throws PreconditionError when the row width differs from the header.
  void add_row(std::vector<Cell> row);
  /// Numeric column by name; integer cells are widened.
  std::vector<double> column(const std::string& name) const;

  /// Header plus one line per row; numbers use the shortest round-trip form.
  void write_csv(std::ostream& out) const;
  /// {"columns": [...], "rows": [{column: value, ...}, ...]}
  Json to_json() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Shortest decimal string that parses back to exactly x, independent of locale.
std::string format_number(double x);

}  // namespace qcaveat
