#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "relmech/cli/scenario.hpp"

namespace relmech::cli {

enum ExitCode : int { kExitOk = 0, kExitAssertion = 1, kExitInvalid = 2, kExitEvaluation = 3 };

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides the scenario's seed
  double tol_scale = 1.0;
  std::string source;  // echoed in the report header
};

/// Runs the tasks in order, writing report.json, one NAME.json per task and
/// NAME*.csv for integrations into out_dir. Progress goes to `out`,
/// diagnostics to `err`. Stops at the first evaluation error.
int run_scenario(const Scenario& scenario, const RunOptions& options, std::ostream& out, std::ostream& err);

/// Loads and runs; parse and validation failures return kExitInvalid.
int run_scenario_file(const std::filesystem::path& path, RunOptions options, std::ostream& out,
                      std::ostream& err);

/// Parse and validate only.
int check_scenario_file(const std::filesystem::path& path, std::ostream& out, std::ostream& err);

}  // namespace relmech::cli
