#include "gridmdp/analysis.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace gridmdp {

namespace {

/// Number of closed communicating classes of the positive-entry adjacency
/// graph (Kosaraju strongly connected components, then a closedness check).
/// More than one closed class means the stationary limit depends on the
/// initial distribution; transient states alone do not.
int count_closed_classes(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());

  // Iterative depth-first search recording finish order.
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<int, int>> stack;
  for (int start = 0; start < n; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    seen[static_cast<std::size_t>(start)] = 1;
    stack.emplace_back(start, 0);
    while (!stack.empty()) {
      const int s = stack.back().first;
      int child = -1;
      while (stack.back().second < n) {
        const int t = stack.back().second++;
        if (m(s, t) > 0.0 && !seen[static_cast<std::size_t>(t)]) {
          child = t;
          break;
        }
      }
      if (child >= 0) {
        seen[static_cast<std::size_t>(child)] = 1;
        stack.emplace_back(child, 0);
      } else {
        order.push_back(s);
        stack.pop_back();
      }
    }
  }

  // Reverse-graph passes in reverse finish order assign component ids.
  std::vector<int> component(static_cast<std::size_t>(n), -1);
  int num_components = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (component[static_cast<std::size_t>(*it)] != -1) continue;
    const int id = num_components++;
    std::vector<int> frontier{*it};
    component[static_cast<std::size_t>(*it)] = id;
    while (!frontier.empty()) {
      const int s = frontier.back();
      frontier.pop_back();
      for (int t = 0; t < n; ++t) {
        if (m(t, s) > 0.0 && component[static_cast<std::size_t>(t)] == -1) {
          component[static_cast<std::size_t>(t)] = id;
          frontier.push_back(t);
        }
      }
    }
  }

  std::vector<char> closed(static_cast<std::size_t>(num_components), 1);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (m(s, t) > 0.0 &&
          component[static_cast<std::size_t>(s)] != component[static_cast<std::size_t>(t)]) {
        closed[static_cast<std::size_t>(component[static_cast<std::size_t>(s)])] = 0;
      }
    }
  }
  int count = 0;
  for (char c : closed) count += c;
  return count;
}

/// Uniform double in [0, 1) from the top 53 bits of the generator output;
/// avoids the implementation-defined std distributions so trajectories are
/// stable across standard libraries.
double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int sample_row_index(const Eigen::MatrixXd& weights, int row, double u) {
  double cumulative = 0.0;
  const Eigen::Index n = weights.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    cumulative += weights(row, i);
    if (u < cumulative) return static_cast<int>(i);
  }
  return static_cast<int>(n - 1);
}

}  // namespace

Eigen::MatrixXd induced_chain(const MdpModel& model, const Policy& policy) {
  validate_policy(model, policy);
  const int n = model.num_states();
  Eigen::MatrixXd m(n, n);
  for (int s = 0; s < n; ++s) {
    m.row(s) = model.kernel(policy.action[static_cast<std::size_t>(s)]).row(s);
  }
  return m;
}

StationaryResult joint_stationary(const MdpModel& model, const Policy& policy,
                                  const Distribution& initial, double tol, std::size_t max_iter) {
  const Eigen::MatrixXd m = induced_chain(model, policy);
  if (initial.size() != m.rows()) {
    throw std::invalid_argument("initial distribution does not match state count");
  }
  StationaryResult result{stationary_distribution(m, initial, tol, max_iter),
                          count_closed_classes(m) > 1};
  return result;
}

std::vector<std::optional<double>> demand_curve(const MdpModel& model, const Policy& policy,
                                                const Distribution& stationary) {
  validate_policy(model, policy);
  if (stationary.size() != model.num_states()) {
    throw std::invalid_argument("stationary distribution does not match state count");
  }
  const int num_price = model.num_price_levels();
  const int num_machine = model.num_machine_states();
  std::vector<std::optional<double>> curve(static_cast<std::size_t>(num_price));
  for (int c = 0; c < num_price; ++c) {
    double weighted_energy = 0.0;
    double mass = 0.0;
    for (int x = 0; x < num_machine; ++x) {
      const int s = x * num_price + c;
      const double p = stationary[s];
      weighted_energy += p * model.energy(s, policy.action[static_cast<std::size_t>(s)]);
      mass += p;
    }
    if (mass > 0.0) curve[static_cast<std::size_t>(c)] = weighted_energy / mass;
  }
  return curve;
}

LongRunAverages long_run_averages(const MdpModel& model, const Policy& policy,
                                  const Distribution& stationary) {
  validate_policy(model, policy);
  if (stationary.size() != model.num_states()) {
    throw std::invalid_argument("stationary distribution does not match state count");
  }
  LongRunAverages out;
  for (int s = 0; s < model.num_states(); ++s) {
    const int a = policy.action[static_cast<std::size_t>(s)];
    const double p = stationary[s];
    out.reward += p * model.expected_reward_column(a)(s);
    out.consumption += p * model.energy(s, a);
  }
  return out;
}

AnalysisReport analyze(const MdpModel& model, const Policy& policy, const Distribution& initial,
                       double tol, std::size_t max_iter) {
  StationaryResult stationary = joint_stationary(model, policy, initial, tol, max_iter);
  const Eigen::VectorXd& joint = stationary.distribution.probabilities();

  const int num_price = model.num_price_levels();
  const int num_machine = model.num_machine_states();
  Eigen::VectorXd price_marginal = Eigen::VectorXd::Zero(num_price);
  Eigen::VectorXd machine_marginal = Eigen::VectorXd::Zero(num_machine);
  for (int x = 0; x < num_machine; ++x) {
    for (int c = 0; c < num_price; ++c) {
      const double p = joint(x * num_price + c);
      price_marginal(c) += p;
      machine_marginal(x) += p;
    }
  }

  const LongRunAverages averages = long_run_averages(model, policy, stationary.distribution);
  AnalysisReport report{Distribution(joint),
                        Distribution(std::move(price_marginal)),
                        Distribution(std::move(machine_marginal)),
                        demand_curve(model, policy, stationary.distribution),
                        averages.reward,
                        averages.consumption,
                        stationary.reducible};
  return report;
}

SimulationReport simulate_trajectory(const MdpModel& model, const Policy& policy,
                                     std::size_t steps, std::uint64_t seed) {
  validate_policy(model, policy);
  if (steps == 0) throw std::invalid_argument("simulation needs at least one step");

  std::mt19937_64 rng(seed);
  const int num_states = model.num_states();
  int state = static_cast<int>(
      std::min<double>(next_uniform(rng) * num_states, num_states - 1));

  const std::size_t num_batches = std::min<std::size_t>(100, steps);
  const std::size_t batch_len = steps / num_batches;
  std::vector<double> batch_reward(num_batches, 0.0);
  std::vector<double> batch_consumption(num_batches, 0.0);

  Eigen::VectorXd occupancy = Eigen::VectorXd::Zero(num_states);
  double total_reward = 0.0;
  double total_consumption = 0.0;

  for (std::size_t t = 0; t < steps; ++t) {
    const int a = policy.action[static_cast<std::size_t>(state)];
    const int next = sample_row_index(model.kernel(a), state, next_uniform(rng));
    const double reward = model.reward(a)(state, next);
    const double consumption = model.energy(state, a);

    occupancy(state) += 1.0;
    total_reward += reward;
    total_consumption += consumption;
    const std::size_t batch = t / batch_len;
    if (batch < num_batches) {
      batch_reward[batch] += reward;
      batch_consumption[batch] += consumption;
    }
    state = next;
  }

  SimulationReport report;
  report.occupancy = occupancy / static_cast<double>(steps);
  report.average_reward = total_reward / static_cast<double>(steps);
  report.average_consumption = total_consumption / static_cast<double>(steps);
  report.steps = steps;
  report.seed = seed;
  report.num_batches = num_batches;

  if (num_batches >= 2) {
    const auto standard_error = [&](const std::vector<double>& sums) {
      double mean = 0.0;
      for (double s : sums) mean += s / static_cast<double>(batch_len);
      mean /= static_cast<double>(num_batches);
      double var = 0.0;
      for (double s : sums) {
        const double d = s / static_cast<double>(batch_len) - mean;
        var += d * d;
      }
      var /= static_cast<double>(num_batches - 1);
      return std::sqrt(var / static_cast<double>(num_batches));
    };
    report.reward_standard_error = standard_error(batch_reward);
    report.consumption_standard_error = standard_error(batch_consumption);
  }
  return report;
}

}  // namespace gridmdp
