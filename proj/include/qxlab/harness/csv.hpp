#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace qxlab::harness {

/// Header plus rows of raw fields. Blank lines are skipped; `line` numbers are 1-based.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;

  std::size_t column(const std::string& name) const;  // npos when absent
  double number(std::size_t row, std::size_t col) const;

  std::string source;
};

/// Comma-separated, no quoting. Every row must have the header's width.
CsvTable parse_csv(const std::string& text, const std::string& source = "<memory>");
CsvTable read_csv(const std::filesystem::path& file);

void write_text(const std::filesystem::path& file, const std::string& text);
std::string read_text(const std::filesystem::path& file);

}  // namespace qxlab::harness
