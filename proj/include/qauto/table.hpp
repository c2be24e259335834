#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace qauto {

/// Columnar experiment output. Metadata renders as '#' comment lines so
/// CSV bodies stay byte-identical across reruns of the same config.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::map<std::string, std::string> metadata;

  void add_row(std::vector<std::string> row);
  std::string body_csv() const;
  void write_csv(std::ostream& os, bool with_metadata = true) const;
  void write_json(std::ostream& os) const;
};

std::string format_double(double v, int precision = 10);

/// FNV-1a hash of a canonical string; used to fingerprint configs.
std::uint64_t fnv1a(const std::string& s);

}  // namespace qauto
