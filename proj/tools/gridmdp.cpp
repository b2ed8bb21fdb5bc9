#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "gridmdp/config.hpp"
#include "gridmdp/errors.hpp"
#include "gridmdp/experiment.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> baseline_policy;
  std::optional<double> gamma;
  std::optional<std::uint64_t> seed;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gridmdp::IoError("cannot read config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) throw gridmdp::IoError("failed reading config file " + path);
  return buffer.str();
}

void add_run_flags(CLI::App* cmd, CliOptions& opts, bool with_seed) {
  cmd->add_option("--config", opts.config_path, "Experiment config file (JSON)")
      ->required();
  cmd->add_option("--out", opts.out_dir, "Output directory (overrides output.directory)");
  cmd->add_option("--baseline-policy", opts.baseline_policy,
                  "Fix the policy to this action wherever available instead of solving");
  cmd->add_option("--gamma", opts.gamma, "Discount factor (overrides solver.gamma)");
  if (with_seed) {
    cmd->add_option("--seed", opts.seed, "Monte Carlo seed (overrides analysis.monte_carlo.seed)");
  }
}

std::string show(double value) {
  std::ostringstream out;
  out.precision(12);
  out << value;
  return out.str();
}

int run(gridmdp::RunMode mode, const CliOptions& opts) {
  const gridmdp::ExperimentConfig config = gridmdp::parse_config(read_file(opts.config_path));
  gridmdp::RunOverrides overrides;
  overrides.out_dir = opts.out_dir;
  overrides.gamma = opts.gamma;
  overrides.seed = opts.seed;
  overrides.baseline_policy = opts.baseline_policy;

  const gridmdp::ExperimentResult result = gridmdp::run_experiment(config, mode, overrides);
  for (const auto& [metric, value] : result.summary) {
    std::cout << metric << " = " << show(value) << "\n";
  }
  for (const std::string& path : result.files_written) {
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridmdp: price-responsive smart load MDP experiments"};
  app.require_subcommand(1);

  CliOptions opts;
  CLI::App* validate = app.add_subcommand("validate", "Parse and echo the config with defaults");
  validate->add_option("--config", opts.config_path, "Experiment config file (JSON)")->required();
  CLI::App* solve = app.add_subcommand("solve", "Solve for the optimal policy");
  add_run_flags(solve, opts, false);
  CLI::App* analyze =
      app.add_subcommand("analyze", "Solve, then compute stationary behavior and demand");
  add_run_flags(analyze, opts, false);
  CLI::App* simulate =
      app.add_subcommand("simulate", "Analyze plus a seeded Monte Carlo cross-check");
  add_run_flags(simulate, opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (validate->parsed()) {
      const gridmdp::ExperimentConfig config =
          gridmdp::parse_config(read_file(opts.config_path));
      std::cout << gridmdp::serialize_config(config);
      return 0;
    }
    if (solve->parsed()) return run(gridmdp::RunMode::solve, opts);
    if (analyze->parsed()) return run(gridmdp::RunMode::analyze, opts);
    return run(gridmdp::RunMode::simulate, opts);
  } catch (const gridmdp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const gridmdp::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const gridmdp::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
