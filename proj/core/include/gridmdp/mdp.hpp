#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace gridmdp {

/// Reporting coordinates of a flat state index: the device's internal
/// (machine) state and the price level it is paired with.
struct StateLabel {
  int machine_state = 0;
  int price_level = 0;
};

/// Raw ingredients of an MdpModel. States are flat indices; the factored
/// models use machine-major order, state = machine_state * num_price_levels
/// + price_level.
struct MdpComponents {
  /// Per-state list of permitted action indices, each ascending and non-empty.
  std::vector<std::vector<int>> available;
  /// Per-action dense transition matrix; row s is a probability distribution
  /// over successors whenever action a is available in s, and is ignored
  /// otherwise.
  std::vector<Eigen::MatrixXd> kernel;
  /// Per-action dense reward matrix; entry (s, s') is the reward collected on
  /// the transition s -> s' under that action.
  std::vector<Eigen::MatrixXd> reward;
  /// Energy drawn per interval when choosing action a in state s (num_states
  /// x num_actions). Used for consumption accounting; may be negative for
  /// generating actions. Empty means all zero.
  Eigen::MatrixXd energy;
  /// Display names, one per action. Empty means "a0", "a1", ...
  std::vector<std::string> action_names;
  /// Reporting labels, one per state. Empty means machine_state = s with a
  /// single price level.
  std::vector<StateLabel> state_labels;
  int num_machine_states = 0;  ///< 0 = derive from labels (or num_states)
  int num_price_levels = 0;    ///< 0 = derive from labels (or 1)
};

/// Finite-state, finite-action MDP with per-state action availability,
/// per-transition rewards, and per-action energy accounting. Immutable
/// after construction; construction validates that every available action's
/// kernel row is a probability distribution (row sum within 1e-12 of 1,
/// entries non-negative), every state offers at least one action, and all
/// rewards and energies are finite.
class MdpModel {
 public:
  explicit MdpModel(MdpComponents parts);

  int num_states() const { return static_cast<int>(available_.size()); }
  int num_actions() const { return static_cast<int>(kernel_.size()); }
  int num_machine_states() const { return num_machine_states_; }
  int num_price_levels() const { return num_price_levels_; }

  const std::vector<int>& available_actions(int s) const { return available_[s]; }
  bool action_available(int s, int a) const;

  const Eigen::MatrixXd& kernel(int a) const { return kernel_[a]; }
  const Eigen::MatrixXd& reward(int a) const { return reward_[a]; }

  double energy(int s, int a) const { return energy_(s, a); }
  const Eigen::MatrixXd& energy_table() const { return energy_; }

  /// Mean one-step reward of choosing `a` in `s`: the kernel row dotted with
  /// the reward row. Throws std::invalid_argument if `a` is not available.
  double expected_reward(int s, int a) const;

  /// Column s of the precomputed per-action expected-reward table; entries
  /// for states where `a` is unavailable are zero and must not be read.
  const Eigen::VectorXd& expected_reward_column(int a) const { return expected_reward_[a]; }

  const std::vector<std::string>& action_names() const { return action_names_; }
  const StateLabel& state_label(int s) const { return state_labels_[s]; }

 private:
  std::vector<std::vector<int>> available_;
  std::vector<Eigen::MatrixXd> kernel_;
  std::vector<Eigen::MatrixXd> reward_;
  std::vector<Eigen::VectorXd> expected_reward_;
  Eigen::MatrixXd energy_;
  std::vector<std::string> action_names_;
  std::vector<StateLabel> state_labels_;
  int num_machine_states_ = 0;
  int num_price_levels_ = 0;
};

/// Deterministic stationary policy: one action index per state.
struct Policy {
  std::vector<int> action;
};

/// Expected discounted reward per state.
struct ValueFunction {
  Eigen::VectorXd value;
};

/// Throws std::invalid_argument unless policy.action[s] is available in s
/// for every state of the model.
void validate_policy(const MdpModel& model, const Policy& policy);

}  // namespace gridmdp
