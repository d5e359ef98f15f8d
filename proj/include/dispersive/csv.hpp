#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace dispersive {

class RunConfig;

using CsvCell = std::variant<double, long, std::string>;

// Doubles are written with 17 significant digits so that values round-trip.
std::string format_cell(const CsvCell& c);

// One comment line naming the config hash, grid and model parameters.
std::string provenance_line(const RunConfig& cfg, const std::string& task);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& provenance, std::vector<std::string> header);

  void row(const std::vector<CsvCell>& cells);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a named column; throws std::invalid_argument when it is missing.
  std::size_t column(const std::string& name) const;
  std::vector<double> numeric_column(const std::string& name) const;
};

// Reads a file written by CsvWriter; comment lines are skipped.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace dispersive
