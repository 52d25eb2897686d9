#include "dxeval/csv.hpp"

#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <ostream>

#include "dxeval/error.hpp"

namespace dxeval::csv {
namespace {

// Splits one logical record; quoted fields may span physical lines.
bool next_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;

  std::string field;
  bool quoted = false;
  for (;;) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field.push_back('"');
            ++i;
          } else {
            quoted = false;
          }
        } else {
          field.push_back(c);
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (c == '\r' && i + 1 == line.size()) {
        // CRLF line ending
      } else {
        field.push_back(c);
      }
    }
    if (!quoted) break;
    field.push_back('\n');
    if (!std::getline(in, line)) {
      throw Error(ErrorCode::MalformedValue, "unterminated quoted field");
    }
  }
  fields.push_back(std::move(field));
  return true;
}

bool blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && fields.front().empty();
}

}  // namespace

Table read(std::istream& in) {
  Table table;
  std::vector<std::string> fields;
  if (!next_record(in, fields)) {
    throw Error(ErrorCode::MissingColumn, "CSV input has no header row");
  }
  if (!fields.empty() && fields.front().starts_with("\xEF\xBB\xBF")) {
    fields.front().erase(0, 3);
  }
  table.header = fields;

  std::size_t line_no = 1;
  while (next_record(in, fields)) {
    ++line_no;
    if (blank(fields)) continue;
    if (fields.size() != table.header.size()) {
      throw Error(ErrorCode::MalformedValue,
                  fmt::format("row {} has {} fields, header has {}", line_no, fields.size(),
                              table.header.size()));
    }
    table.rows.push_back(fields);
  }
  return table;
}

Table read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  return read(in);
}

std::vector<std::string> read_header(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  std::vector<std::string> fields;
  if (!next_record(in, fields)) {
    throw Error(ErrorCode::MissingColumn, "CSV input has no header row");
  }
  if (!fields.empty() && fields.front().starts_with("\xEF\xBB\xBF")) {
    fields.front().erase(0, 3);
  }
  return fields;
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n\r") == std::string::npos) {
      out << f;
      continue;
    }
    out << '"';
    for (char c : f) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
  }
  out << '\n';
}

std::string format_double(double value) { return fmt::format("{}", value); }

}  // namespace dxeval::csv
