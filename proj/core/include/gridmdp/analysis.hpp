#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gridmdp/mdp.hpp"
#include "gridmdp/price_process.hpp"

namespace gridmdp {

/// Stationary behavior of a model under a fixed policy, plus the derived
/// demand-response quantities.
struct AnalysisReport {
  Distribution joint_stationary;          ///< over flat states (machine x price)
  Distribution price_marginal;            ///< joint summed over machine states
  Distribution machine_marginal;          ///< joint summed over price levels
  /// Stationary mean energy drawn at each price level; disengaged where the
  /// price marginal carries no mass.
  std::vector<std::optional<double>> demand_curve;
  double average_reward = 0.0;            ///< long-run reward per interval
  double average_consumption = 0.0;       ///< long-run energy per interval
  /// True when the induced chain splits into more than one closed recurrent
  /// class, i.e. when the stationary limit depends on the initial
  /// distribution. Transient states alone (a unichain) do not set this.
  bool induced_chain_reducible = false;
};

/// Markov chain over the full state space obtained by fixing each state's
/// action to the policy's choice. Row-stochastic by construction.
Eigen::MatrixXd induced_chain(const MdpModel& model, const Policy& policy);

/// Stationary distribution of the induced chain, iterated from `initial`
/// (power iteration with Cesaro fallback). `reducible` is set when the chain
/// has more than one closed recurrent class, in which case the result is the
/// limit reached from `initial` rather than a unique stationary law.
struct StationaryResult {
  Distribution distribution;
  bool reducible = false;
};
StationaryResult joint_stationary(const MdpModel& model, const Policy& policy,
                                  const Distribution& initial, double tol = 1e-10,
                                  std::size_t max_iter = 1'000'000);

/// Stationary mean energy conditioned on each price level: the energy of the
/// chosen action averaged over machine states with the joint stationary
/// weights, normalized by the price marginal. Levels whose marginal is zero
/// are reported as std::nullopt rather than zero.
std::vector<std::optional<double>> demand_curve(const MdpModel& model, const Policy& policy,
                                                const Distribution& stationary);

struct LongRunAverages {
  double reward = 0.0;
  double consumption = 0.0;
};

/// Stationary expectation of the one-step reward and of the chosen action's
/// energy under the given occupancy.
LongRunAverages long_run_averages(const MdpModel& model, const Policy& policy,
                                  const Distribution& stationary);

/// Everything above in one pass: induced chain, its stationary distribution
/// from `initial`, marginals, demand curve, and long-run averages.
AnalysisReport analyze(const MdpModel& model, const Policy& policy, const Distribution& initial,
                       double tol = 1e-10, std::size_t max_iter = 1'000'000);

/// Sampled trajectory statistics. Standard errors come from batch means
/// (trajectory split into `num_batches` contiguous batches).
struct SimulationReport {
  Eigen::VectorXd occupancy;          ///< empirical state frequencies
  double average_reward = 0.0;
  double average_consumption = 0.0;
  double reward_standard_error = 0.0;
  double consumption_standard_error = 0.0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::size_t num_batches = 0;
};

/// Simulates `steps` transitions under the policy with a seeded mt19937_64
/// (start state drawn uniformly from the same stream). Identical seeds give
/// bit-identical trajectories within a build.
SimulationReport simulate_trajectory(const MdpModel& model, const Policy& policy,
                                     std::size_t steps, std::uint64_t seed);

}  // namespace gridmdp
