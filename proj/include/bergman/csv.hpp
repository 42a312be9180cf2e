#pragma once

#include <string>
#include <vector>

namespace bergman {

using CsvRow = std::vector<std::string>;

struct CsvTable {
  CsvRow header;
  std::vector<CsvRow> rows;

  std::string str() const;
  // index of a header column, or -1
  int column(const std::string& name) const;
};

std::string csv_escape(const std::string& field);
CsvTable parse_csv(const std::string& text);
CsvTable read_csv_file(const std::string& path);

// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace bergman
