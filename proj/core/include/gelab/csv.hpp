#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace gelab {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Splits one CSV line on commas. Fields are unquoted (every schema here is numeric or
/// identifier-like); a trailing '\r' is stripped.
std::vector<std::string_view> split_csv_line(std::string_view line);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os) const;
};

}  // namespace gelab
