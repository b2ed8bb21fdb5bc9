#pragma once

#include <string>
#include <vector>

namespace gridmdp::csv {

/// Shortest decimal form that parses back to the same double ("nan" for
/// undefined entries).
std::string format_double(double value);

/// One CSV cell from either a string or a number.
struct Cell {
  std::string text;
  Cell(std::string value) : text(std::move(value)) {}
  Cell(const char* value) : text(value) {}
  Cell(double value) : text(format_double(value)) {}
  Cell(int value) : text(std::to_string(value)) {}
};

/// Writes header plus rows as UTF-8, comma-separated, LF line endings.
/// Throws IoError if the file cannot be created or written.
void write_table(const std::string& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<Cell>>& rows);

}  // namespace gridmdp::csv
