#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace alf {

/// Shortest decimal text that parses back to the same double. Infinities are
/// written "inf" / "-inf" and NaN as "nan".
std::string format_number(double value);

/// Parses text written by format_number (also accepts ordinary decimals).
/// Throws InvalidInput on anything else.
double parse_number(std::string_view text);

/// Header plus rows of already-formatted cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// RFC 4180 text: cells containing a comma, quote or newline are quoted.
  std::string to_string() const;
};

/// Splits CSV text produced by CsvTable::to_string back into a table.
CsvTable parse_csv(std::string_view text);

/// Writes content to a sibling temporary file and renames it over path, so
/// readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace alf
