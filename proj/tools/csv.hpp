#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tasbm::cli {

// RFC 4180 quoting: fields with a comma, quote or newline are quoted.
std::string csv_field(std::string_view text);
std::string csv_line(const std::vector<std::string>& fields);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // source line per row
};

// Throws ParseError on unbalanced quotes, a header other than `header`, or a
// row whose width differs from the header's.
CsvTable parse_csv(std::string_view text, const std::vector<std::string>& header);

}  // namespace tasbm::cli
