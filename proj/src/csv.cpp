#include "dispersive/csv.hpp"

#include "dispersive/config.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace dispersive {

std::string format_cell(const CsvCell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
  return std::get<std::string>(c);
}

std::string provenance_line(const RunConfig& cfg, const std::string& task) {
  return "# task=" + task + " config=" + hex_hash(cfg.hash()) + " grid=n:" + cfg.raw("grid.n") + ",L:" + cfg.raw("grid.L") +
         " model=m:" + cfg.raw("model.m") + ",q:" + cfg.raw("model.q") + ",variant:" + cfg.raw("model.variant") +
         ",phase:" + cfg.raw("model.phase");
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& provenance, std::vector<std::string> header)
    : path_(path), columns_(header.size()) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw std::runtime_error("cannot write '" + path.string() + "'");
  out_ << provenance << "\n";
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (cells.size() != columns_)
    throw std::logic_error("CSV row has " + std::to_string(cells.size()) + " cells, header has " + std::to_string(columns_));
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << format_cell(cells[i]);
  out_ << "\n";
  if (!out_) throw std::runtime_error("write to '" + path_.string() + "' failed");
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw std::invalid_argument("CSV has no column '" + name + "'");
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  for (const auto& r : rows) {
    if (c >= r.size()) throw std::invalid_argument("short CSV row in column '" + name + "'");
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(r[c], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != r[c].size()) throw std::invalid_argument("non-numeric value '" + r[c] + "' in column '" + name + "'");
    out.push_back(v);
  }
  return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open CSV file '" + path.string() + "'");
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw std::invalid_argument("CSV file '" + path.string() + "' has no header");
  return t;
}

}  // namespace dispersive
