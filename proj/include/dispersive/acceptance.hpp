#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace dispersive {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AcceptanceContext {
  std::filesystem::path out_dir;
  std::uint64_t seed = 20240917;
  std::string provenance;  // first line of every CSV written
};

constexpr int acceptance_count = 14;

const std::string& criterion_name(int id);

// Runs one criterion with its tolerances and parameters fixed in code, writing
// acceptance_<id>_<name>.csv into ctx.out_dir.
CriterionResult run_criterion(int id, const AcceptanceContext& ctx);

std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, const AcceptanceContext& ctx);

// "all" or a comma-separated list of ids.
std::vector<int> parse_criteria(const std::string& spec);

void write_summary(const std::vector<CriterionResult>& results, const std::filesystem::path& path,
                   const std::string& provenance);

std::string format_result(const CriterionResult& r);

}  // namespace dispersive
