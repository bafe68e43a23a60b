#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "crmgraph/error.hpp"

namespace crmgraph::csv {

/// Parsed CSV document: header row plus data rows, all as raw strings.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

namespace detail {

// Splits one physical line. Supports double-quoted fields with "" escapes;
// the B2B dataset itself never quotes, but hand-edited inputs do.
inline std::vector<std::string> split_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
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
      if (!field.empty())
        fail(Errc::malformed_csv, "stray quote in line " + std::to_string(line_no));
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) fail(Errc::malformed_csv, "unterminated quote in line " + std::to_string(line_no));
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace detail

inline Table parse(std::istream& in) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && table.header.empty()) continue;
    auto fields = detail::split_line(line, line_no);
    if (table.header.empty()) {
      table.header = std::move(fields);
    } else {
      if (fields.size() != table.header.size())
        fail(Errc::malformed_csv, "line " + std::to_string(line_no) + " has " +
                                      std::to_string(fields.size()) + " fields, expected " +
                                      std::to_string(table.header.size()));
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.header.empty()) fail(Errc::malformed_csv, "no header row");
  return table;
}

inline Table read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());
  return parse(in);
}

/// Quotes a field only when it needs quoting.
inline std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace crmgraph::csv
