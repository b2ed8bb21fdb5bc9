#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridmdp/devices.hpp"

namespace gridmdp {

struct PriceConfig {
  std::vector<double> levels = {1.0, 1.25, 1.5, 1.75, 2.0};
  double p_up = 0.5;
  double p_down = 0.3;

  bool operator==(const PriceConfig&) const = default;
};

enum class SolverAlgorithm { value_iteration, policy_iteration };

struct SolverConfig {
  SolverAlgorithm algorithm = SolverAlgorithm::value_iteration;
  double gamma = 0.99;
  double tol = 1e-10;
  std::size_t max_iter = 1'000'000;

  bool operator==(const SolverConfig&) const = default;
};

/// Initial distribution for the stationary iteration: uniform when `point`
/// is empty, otherwise a point mass at (machine state x, price level c).
struct InitialDistributionConfig {
  struct Point {
    int x = 0;
    int c = 0;
    bool operator==(const Point&) const = default;
  };
  std::optional<Point> point;

  bool operator==(const InitialDistributionConfig&) const = default;
};

struct MonteCarloConfig {
  std::size_t steps = 1'000'000;
  std::uint64_t seed = 0;

  bool operator==(const MonteCarloConfig&) const = default;
};

struct AnalysisConfig {
  InitialDistributionConfig initial;
  std::optional<MonteCarloConfig> monte_carlo;

  bool operator==(const AnalysisConfig&) const = default;
};

/// Valid table names for OutputConfig::tables, in emission order.
const std::vector<std::string>& known_table_names();

struct OutputConfig {
  std::string directory = "out";
  /// Subset of known_table_names(); empty never occurs after parsing (the
  /// default is all tables).
  std::vector<std::string> tables = known_table_names();

  bool operator==(const OutputConfig&) const = default;
};

/// One experiment, fully specified. parse_config applies defaults and
/// validates every downstream precondition up front, so a config that parses
/// never fails model construction later.
struct ExperimentConfig {
  PriceConfig price;
  DeviceSpec device;
  SolverConfig solver;
  AnalysisConfig analysis;
  OutputConfig output;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses a JSON experiment document. Unknown keys anywhere are an error,
/// omitted blocks and fields take the documented defaults, and every
/// constraint violation is reported as ConfigError naming the field.
ExperimentConfig parse_config(const std::string& text);

/// Canonical JSON serialization (sorted keys, all defaults explicit).
/// parse_config(serialize_config(c)) == c for every valid config.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace gridmdp
