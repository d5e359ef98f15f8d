#include "dispersive/config.hpp"
#include "dispersive/fourier.hpp"
#include "dispersive/tasks.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

// Exit codes: 0 success, 1 invalid input or configuration, 2 numerical failure.
constexpr int exit_invalid = 1;
constexpr int exit_numerical = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace dispersive;

  CLI::App app{"Pseudo-spectral lab for dissipative-dispersive equations with |d_x|^m damping"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("-c,--config", config_path, "config file (key = value lines in [section] blocks)");
  app.add_option("--set", overrides, "override one key, e.g. --set model.m=2.5 (repeatable)");

  std::vector<CLI::App*> task_cmds;
  const std::vector<std::pair<std::string, std::string>> help = {
      {"kernel", "kernel samples and norm table of d_x^j G_m(t)"},
      {"solve-linear", "linear flow of the initial data at the listed times"},
      {"solve-nonlinear", "nonlinear solve (direct, picard or both) with decay fits"},
      {"expand", "asymptotic expansion residuals and term tables"},
      {"second-term", "scaled residuals with and without the second-term profile"},
      {"fit", "power-law fits of columns of a CSV file"},
      {"check-ineq", "convolution inequality ratios"},
      {"verify-all", "run the acceptance criteria and write a PASS/FAIL summary"},
  };
  for (const auto& [name, text] : help) task_cmds.push_back(app.add_subcommand(name, text));
  app.add_subcommand("run", "run the task named by task.name");
  auto* print_cmd = app.add_subcommand("print-config", "print the resolved configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_invalid;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig() : RunConfig::load(config_path);
    for (const auto& o : overrides) cfg.apply_override(o);
    for (auto* cmd : task_cmds)
      if (cmd->parsed()) cfg.set("task.name", cmd->get_name());
    if (print_cmd->parsed()) {
      std::cout << cfg.serialize();
      return 0;
    }
    const auto outcome = run_task(cfg.get_text("task.name"), cfg, std::cout);
    if (cfg.get_text("task.name") == "verify-all")
      std::cout << (outcome.all_criteria_passed ? "all criteria passed" : "some criteria failed; see acceptance_summary.csv")
                << "\n";
    return 0;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  }
}
