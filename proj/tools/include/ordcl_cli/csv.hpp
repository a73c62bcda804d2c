#pragma once

#include <istream>
#include <string>
#include <vector>

namespace ordcl::cli {

/// Comma-separated text with a header row. Fields may be double-quoted
/// ("" inside quotes is a literal quote); CRLF line ends are accepted.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header name, or -1.
  int column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

}  // namespace ordcl::cli
