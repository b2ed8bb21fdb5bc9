#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridmdp/analysis.hpp"
#include "gridmdp/config.hpp"
#include "gridmdp/solvers.hpp"

namespace gridmdp {

/// What run_experiment should do beyond solving for the policy.
enum class RunMode { solve, analyze, simulate };

/// Command-line overrides layered on top of the parsed config.
struct RunOverrides {
  std::optional<std::string> out_dir;
  std::optional<double> gamma;
  std::optional<std::uint64_t> seed;
  /// Action name; replaces the optimizing solver with the fixed policy that
  /// picks this action wherever available (lowest-index action elsewhere).
  std::optional<std::string> baseline_policy;
};

/// Fixed policy choosing `action_name` wherever it is available and the
/// lowest-indexed available action elsewhere. Throws std::invalid_argument
/// for an unknown action name.
Policy naive_policy(const MdpModel& model, const std::string& action_name);

/// Default comparison baseline for each device kind: the price-ignoring
/// strategy (control keeps, optional runs full, deferrable works
/// immediately, storage charges when possible).
std::string default_baseline_action(DeviceKind kind);

/// Outcome of a full experiment run, kept in memory so callers can inspect
/// results without re-reading the emitted CSV files.
struct ExperimentResult {
  SolveResult solve;
  std::optional<AnalysisReport> report;            ///< analyze and simulate modes
  std::optional<SimulationReport> simulation;      ///< simulate mode with monte_carlo
  /// Ordered summary rows as written to summary.csv.
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> files_written;
};

/// Builds the price chain and device model from the config, solves (or
/// applies the baseline policy), analyzes per `mode`, and writes the
/// selected output tables. All computation happens before the first file is
/// created, so a failing run leaves no partial outputs.
ExperimentResult run_experiment(const ExperimentConfig& config, RunMode mode,
                                const RunOverrides& overrides = {});

/// Writes the selected tables (policy, stationary, price_marginal,
/// machine_marginal, demand_curve, summary) into `dir` as UTF-8 CSV with a
/// header row, LF line endings, machine-major row order, and full
/// double-precision numbers. Returns the paths written.
std::vector<std::string> emit_tables(const AnalysisReport& report, const Policy& policy,
                                     const MdpModel& model, const PriceChain& chain,
                                     const std::vector<std::pair<std::string, double>>& summary,
                                     const std::string& dir,
                                     const std::vector<std::string>& tables);

}  // namespace gridmdp
