#include "qauto/table.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qauto {

void ResultTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("row width does not match column schema");
  rows.push_back(std::move(row));
}

std::string ResultTable::body_csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i)
    os << columns[i] << (i + 1 < columns.size() ? "," : "");
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << row[i] << (i + 1 < row.size() ? "," : "");
    os << "\n";
  }
  return os.str();
}

void ResultTable::write_csv(std::ostream& os, bool with_metadata) const {
  if (with_metadata)
    for (const auto& [k, v] : metadata) os << "# " << k << "=" << v << "\n";
  os << body_csv();
}

void ResultTable::write_json(std::ostream& os) const {
  nlohmann::json j;
  j["metadata"] = metadata;
  j["columns"] = columns;
  j["rows"] = rows;
  os << j.dump(2) << "\n";
}

std::string format_double(double v, int precision) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace qauto
