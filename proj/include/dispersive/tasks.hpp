#pragma once

#include "dispersive/config.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace dispersive {

const std::vector<std::string>& task_names();

// Output directory of a run: DISPERSIVE_OUTPUT_DIR if set, else output.dir.
std::filesystem::path output_dir(const RunConfig& cfg);

// Runs one task and writes its CSV files.  Validation problems throw
// std::invalid_argument (ConfigError included); numerical breakdown throws
// NumericalFailure.  verify-all completes normally even when criteria fail;
// the outcome is in its summary CSV and in the returned flag.
struct TaskOutcome {
  std::vector<std::filesystem::path> files;
  bool all_criteria_passed = true;
};

TaskOutcome run_task(const std::string& task, const RunConfig& cfg, std::ostream& log);

}  // namespace dispersive
