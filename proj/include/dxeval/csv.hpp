#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dxeval::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Reads RFC 4180 style CSV: comma separated, optional double quotes,
/// header row required. A UTF-8 BOM on the first line is skipped.
Table read(std::istream& in);
Table read_file(const std::filesystem::path& path);

/// Header row only; cheaper than read_file for column probing.
std::vector<std::string> read_header(const std::filesystem::path& path);

void write_row(std::ostream& out, std::span<const std::string> fields);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace dxeval::csv
