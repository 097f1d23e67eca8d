#include "qcaveat/table.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "qcaveat/error.hpp"

namespace qcaveat {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw PreconditionError("result table needs at least one column");
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw PreconditionError("row has " + std::to_string(row.size()) + " cells, expected " +
                            std::to_string(columns_.size()));
  }
  rows_.push_back(std::move(row));
}

std::vector<double> ResultTable::column(const std::string& name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw PreconditionError("no column named '" + name + "'");
  const auto idx = static_cast<std::size_t>(it - columns_.begin());
  std::vector<double> out;
  for (const auto& row : rows_) {
    const Cell& c = row[idx];
    if (const auto* d = std::get_if<double>(&c)) {
      out.push_back(*d);
    } else if (const auto* i = std::get_if<std::int64_t>(&c)) {
      out.push_back(static_cast<double>(*i));
    } else {
      throw PreconditionError("column '" + name + "' is not numeric");
    }
  }
  return out;
}

void ResultTable::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    out << (i ? "," : "") << csv_escape(columns_[i]);
  }
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(
          [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              out << format_number(v);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
              out << std::to_string(v);
            } else {
              out << csv_escape(v);
            }
          },
          row[i]);
    }
    out << '\n';
  }
}

Json ResultTable::to_json() const {
  Json rows = Json::array();
  for (const auto& row : rows_) {
    Json r = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              r[columns_[i]] = std::isfinite(v) ? Json(v) : Json(format_number(v));
            } else {
              r[columns_[i]] = v;
            }
          },
          row[i]);
    }
    rows.push_back(std::move(r));
  }
  Json j;
  j["columns"] = columns_;
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace qcaveat
