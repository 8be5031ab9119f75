#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace chaospso {

/// Shortest decimal that reads back to the same double; "nan"/"inf"/"-inf"
/// for non-finite values.
std::string format_double(double v);

/// Parses a full-field double; throws ValidationError otherwise.
double parse_double(std::string_view s);
std::uint64_t parse_u64(std::string_view s);
long long parse_int(std::string_view s);

/// Quotes a field only when it contains a comma, quote or line break.
std::string csv_field(std::string_view s);

/// Joins fields with commas and appends '\n'.
std::string csv_row(const std::vector<std::string>& fields);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws ValidationError when absent.
  std::size_t column(std::string_view name) const;
};

/// Parses RFC 4180 style text. A trailing record without a terminating
/// newline is dropped when `complete_lines_only` is set.
CsvTable parse_csv(std::string_view text, bool complete_lines_only = false);

CsvTable read_csv(const std::string& path);

std::string read_file(const std::string& path);

/// Writes `content` to `path` via a temporary file and rename.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace chaospso
