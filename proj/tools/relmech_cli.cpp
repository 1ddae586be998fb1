#include <CLI11.hpp>

#include <iostream>

#include "relmech/cli/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dynamic equations, reference frames and inertial forces on scenario files"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  double tol_scale = 1.0;

  auto* run = app.add_subcommand("run", "Run every task of a scenario and write reports");
  run->add_option("scenario", scenario, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  auto* seed_opt = run->add_option("--seed", seed, "Sampling seed (overrides the scenario's)");
  run->add_option("--tol-scale", tol_scale, "Multiplier applied to every tolerance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "Parse and validate a scenario without running it");
  check->add_option("scenario", scenario, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : relmech::cli::kExitInvalid;
  }

  if (*check) return relmech::cli::check_scenario_file(scenario, std::cout, std::cerr);

  relmech::cli::RunOptions options;
  options.out_dir = out_dir;
  options.tol_scale = tol_scale;
  if (*seed_opt) options.seed = seed;
  return relmech::cli::run_scenario_file(scenario, options, std::cout, std::cerr);
}
