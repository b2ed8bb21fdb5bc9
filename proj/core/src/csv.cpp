#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "gridmdp/errors.hpp"

namespace gridmdp::csv {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void write_table(const std::string& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<Cell>>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << row[i].text;
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace gridmdp::csv
