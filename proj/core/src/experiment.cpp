#include "gridmdp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <utility>

#include "csv.hpp"
#include "gridmdp/devices.hpp"
#include "gridmdp/errors.hpp"
#include "gridmdp/price_process.hpp"

namespace gridmdp {

namespace {

namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

std::string table_path(const std::string& dir, const std::string& table) {
  return (fs::path(dir) / (table + ".csv")).string();
}

bool selected(const std::vector<std::string>& tables, const std::string& name) {
  return std::find(tables.begin(), tables.end(), name) != tables.end();
}

double price_of(const PriceChain& chain, int c) {
  return chain.levels()[static_cast<std::size_t>(c)];
}

void write_policy_table(const std::string& path, const MdpModel& model, const PriceChain& chain,
                        const Policy& policy) {
  std::vector<std::vector<csv::Cell>> rows;
  rows.reserve(static_cast<std::size_t>(model.num_states()));
  for (int s = 0; s < model.num_states(); ++s) {
    const StateLabel& label = model.state_label(s);
    const int a = policy.action[static_cast<std::size_t>(s)];
    rows.push_back({label.machine_state, price_of(chain, label.price_level),
                    model.action_names()[static_cast<std::size_t>(a)]});
  }
  csv::write_table(path, {"x", "c", "action"}, rows);
}

void write_summary_table(const std::string& path,
                         const std::vector<std::pair<std::string, double>>& summary) {
  std::vector<std::vector<csv::Cell>> rows;
  rows.reserve(summary.size());
  for (const auto& [metric, value] : summary) rows.push_back({metric, value});
  csv::write_table(path, {"metric", "value"}, rows);
}

Policy resolve_policy(const MdpModel& model, const ExperimentConfig& config,
                      const RunOverrides& overrides, double gamma, SolveResult& solve) {
  if (overrides.baseline_policy.has_value()) {
    Policy policy;
    try {
      policy = naive_policy(model, *overrides.baseline_policy);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("baseline policy: ") + e.what());
    }
    solve.policy = policy;
    solve.value = policy_evaluation(model, policy, gamma, config.solver.tol);
    solve.iterations = 0;
    solve.residual = 0.0;
    return policy;
  }
  solve = config.solver.algorithm == SolverAlgorithm::value_iteration
              ? value_iteration(model, gamma, config.solver.tol, config.solver.max_iter)
              : policy_iteration(model, gamma);
  return solve.policy;
}

Distribution initial_distribution(const MdpModel& model, const AnalysisConfig& analysis) {
  if (analysis.initial.point.has_value()) {
    const auto& point = *analysis.initial.point;
    if (point.x < 0 || point.x >= model.num_machine_states() || point.c < 0 ||
        point.c >= model.num_price_levels()) {
      throw ConfigError("analysis.initial: point out of range for this model");
    }
    return Distribution::point(model.num_states(),
                               point.x * model.num_price_levels() + point.c);
  }
  return Distribution::uniform(model.num_states());
}

}  // namespace

Policy naive_policy(const MdpModel& model, const std::string& action_name) {
  const auto& names = model.action_names();
  const auto it = std::find(names.begin(), names.end(), action_name);
  if (it == names.end()) {
    throw std::invalid_argument("unknown action name \"" + action_name + "\"");
  }
  const int target = static_cast<int>(it - names.begin());
  Policy policy;
  policy.action.resize(static_cast<std::size_t>(model.num_states()));
  for (int s = 0; s < model.num_states(); ++s) {
    policy.action[static_cast<std::size_t>(s)] =
        model.action_available(s, target) ? target : model.available_actions(s).front();
  }
  return policy;
}

std::string default_baseline_action(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::optional_load: return "full";
    case DeviceKind::deferrable_load: return "work";
    case DeviceKind::control_load: return "keep";
    case DeviceKind::storage_load: return "charge";
  }
  throw std::invalid_argument("unknown device kind");
}

std::vector<std::string> emit_tables(const AnalysisReport& report, const Policy& policy,
                                     const MdpModel& model, const PriceChain& chain,
                                     const std::vector<std::pair<std::string, double>>& summary,
                                     const std::string& dir,
                                     const std::vector<std::string>& tables) {
  ensure_directory(dir);
  std::vector<std::string> written;

  for (const std::string& table : known_table_names()) {
    if (!selected(tables, table)) continue;
    const std::string path = table_path(dir, table);
    if (table == "policy") {
      write_policy_table(path, model, chain, policy);
    } else if (table == "stationary") {
      std::vector<std::vector<csv::Cell>> rows;
      for (int s = 0; s < model.num_states(); ++s) {
        const StateLabel& label = model.state_label(s);
        rows.push_back({label.machine_state, price_of(chain, label.price_level),
                        report.joint_stationary[s]});
      }
      csv::write_table(path, {"x", "c", "probability"}, rows);
    } else if (table == "price_marginal") {
      std::vector<std::vector<csv::Cell>> rows;
      for (int c = 0; c < model.num_price_levels(); ++c) {
        rows.push_back({price_of(chain, c), report.price_marginal[c]});
      }
      csv::write_table(path, {"c", "probability"}, rows);
    } else if (table == "machine_marginal") {
      std::vector<std::vector<csv::Cell>> rows;
      for (int x = 0; x < model.num_machine_states(); ++x) {
        rows.push_back({x, report.machine_marginal[x]});
      }
      csv::write_table(path, {"x", "probability"}, rows);
    } else if (table == "demand_curve") {
      std::vector<std::vector<csv::Cell>> rows;
      for (int c = 0; c < model.num_price_levels(); ++c) {
        const auto& entry = report.demand_curve[static_cast<std::size_t>(c)];
        rows.push_back({price_of(chain, c), entry.has_value() ? *entry : kNaN});
      }
      csv::write_table(path, {"c", "expected_demand"}, rows);
    } else if (table == "summary") {
      write_summary_table(path, summary);
    }
    written.push_back(path);
  }
  return written;
}

ExperimentResult run_experiment(const ExperimentConfig& config, RunMode mode,
                                const RunOverrides& overrides) {
  double gamma = config.solver.gamma;
  if (overrides.gamma.has_value()) {
    gamma = *overrides.gamma;
    if (!(gamma > 0.0 && gamma < 1.0)) {
      throw ConfigError("gamma override must lie strictly between 0 and 1");
    }
  }
  std::string out_dir = overrides.out_dir.value_or(config.output.directory);
  if (out_dir.empty()) throw ConfigError("output directory must not be empty");

  const PriceChain chain =
      build_birth_death_chain(config.price.levels, config.price.p_up, config.price.p_down);
  const MdpModel model = build_device(config.device, chain);

  ExperimentResult result;
  const Policy policy = resolve_policy(model, config, overrides, gamma, result.solve);

  std::vector<std::pair<std::string, double>>& summary = result.summary;
  summary.emplace_back("gamma", gamma);
  summary.emplace_back("solver_iterations", static_cast<double>(result.solve.iterations));
  summary.emplace_back("solver_residual", result.solve.residual);
  const Eigen::VectorXd& value = result.solve.value.value;
  summary.emplace_back("discounted_value_mean", value.mean());
  summary.emplace_back("discounted_value_min", value.minCoeff());
  summary.emplace_back("discounted_value_max", value.maxCoeff());

  if (mode != RunMode::solve) {
    const Distribution initial = initial_distribution(model, config.analysis);
    result.report = analyze(model, policy, initial);

    const Policy baseline = naive_policy(model, default_baseline_action(config.device.kind()));
    const AnalysisReport baseline_report = analyze(model, baseline, initial);

    const AnalysisReport& report = *result.report;
    summary.emplace_back("average_reward", report.average_reward);
    summary.emplace_back("average_consumption", report.average_consumption);
    summary.emplace_back("baseline_average_reward", baseline_report.average_reward);
    summary.emplace_back("baseline_average_consumption", baseline_report.average_consumption);
    const double base_reward = std::abs(baseline_report.average_reward);
    summary.emplace_back("percent_savings",
                         base_reward > 0.0
                             ? (report.average_reward - baseline_report.average_reward) /
                                   base_reward * 100.0
                             : kNaN);
    const double base_consumption = std::abs(baseline_report.average_consumption);
    summary.emplace_back(
        "percent_consumption_increase",
        base_consumption > 0.0
            ? (report.average_consumption - baseline_report.average_consumption) /
                  base_consumption * 100.0
            : kNaN);
    summary.emplace_back("induced_chain_reducible", report.induced_chain_reducible ? 1.0 : 0.0);
  }

  if (mode == RunMode::simulate) {
    MonteCarloConfig mc = config.analysis.monte_carlo.value_or(MonteCarloConfig{});
    if (overrides.seed.has_value()) mc.seed = *overrides.seed;
    result.simulation = simulate_trajectory(model, policy, mc.steps, mc.seed);
    const SimulationReport& sim = *result.simulation;
    summary.emplace_back("mc_average_reward", sim.average_reward);
    summary.emplace_back("mc_average_consumption", sim.average_consumption);
    summary.emplace_back("mc_reward_standard_error", sim.reward_standard_error);
    summary.emplace_back("mc_consumption_standard_error", sim.consumption_standard_error);
    summary.emplace_back("mc_steps", static_cast<double>(sim.steps));
    summary.emplace_back("mc_seed", static_cast<double>(sim.seed));
    summary.emplace_back("mc_num_batches", static_cast<double>(sim.num_batches));
  }

  if (mode == RunMode::solve) {
    ensure_directory(out_dir);
    if (selected(config.output.tables, "policy")) {
      const std::string path = table_path(out_dir, "policy");
      write_policy_table(path, model, chain, policy);
      result.files_written.push_back(path);
    }
    if (selected(config.output.tables, "summary")) {
      const std::string path = table_path(out_dir, "summary");
      write_summary_table(path, summary);
      result.files_written.push_back(path);
    }
  } else {
    result.files_written = emit_tables(*result.report, policy, model, chain, summary, out_dir,
                                       config.output.tables);
  }
  return result;
}

}  // namespace gridmdp
