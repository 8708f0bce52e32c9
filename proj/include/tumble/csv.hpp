#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace tumble {

/// Numeric table with a header row and optional "# key=value" metadata lines.
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
  std::vector<double> column_values(const std::string& name) const;
  const std::string* meta(const std::string& key) const;
  void add_row(std::vector<double> row);
};

/// %.17g formatting, locale free; round-trips every finite double.
std::string format_double(double v);

void write_csv(std::ostream& os, const CsvTable& table);
std::string to_csv(const CsvTable& table);
void write_csv_file(const std::filesystem::path& path, const CsvTable& table);

CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::filesystem::path& path);

}  // namespace tumble
