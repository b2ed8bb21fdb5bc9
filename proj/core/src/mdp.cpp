#include "gridmdp/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace gridmdp {

namespace {

constexpr double kRowSumTol = 1e-12;

std::string state_action(int s, int a) {
  return "state " + std::to_string(s) + ", action " + std::to_string(a);
}

}  // namespace

MdpModel::MdpModel(MdpComponents parts)
    : available_(std::move(parts.available)),
      kernel_(std::move(parts.kernel)),
      reward_(std::move(parts.reward)),
      energy_(std::move(parts.energy)),
      action_names_(std::move(parts.action_names)),
      state_labels_(std::move(parts.state_labels)) {
  const int num_states = static_cast<int>(available_.size());
  const int num_actions = static_cast<int>(kernel_.size());
  if (num_states == 0) throw std::invalid_argument("model needs at least one state");
  if (num_actions == 0) throw std::invalid_argument("model needs at least one action");
  if (reward_.size() != kernel_.size()) {
    throw std::invalid_argument("kernel and reward action counts differ");
  }
  for (int a = 0; a < num_actions; ++a) {
    if (kernel_[a].rows() != num_states || kernel_[a].cols() != num_states) {
      throw std::invalid_argument("kernel for action " + std::to_string(a) +
                                  " is not num_states x num_states");
    }
    if (reward_[a].rows() != num_states || reward_[a].cols() != num_states) {
      throw std::invalid_argument("reward for action " + std::to_string(a) +
                                  " is not num_states x num_states");
    }
    if (!reward_[a].allFinite()) {
      throw std::invalid_argument("reward for action " + std::to_string(a) + " is not finite");
    }
  }

  if (energy_.size() == 0) {
    energy_ = Eigen::MatrixXd::Zero(num_states, num_actions);
  } else if (energy_.rows() != num_states || energy_.cols() != num_actions) {
    throw std::invalid_argument("energy table is not num_states x num_actions");
  } else if (!energy_.allFinite()) {
    throw std::invalid_argument("energy table is not finite");
  }

  for (int s = 0; s < num_states; ++s) {
    const auto& actions = available_[s];
    if (actions.empty()) {
      throw std::invalid_argument("state " + std::to_string(s) + " offers no action");
    }
    if (!std::is_sorted(actions.begin(), actions.end())) {
      throw std::invalid_argument("available actions for state " + std::to_string(s) +
                                  " are not ascending");
    }
    for (std::size_t k = 0; k < actions.size(); ++k) {
      const int a = actions[k];
      if (a < 0 || a >= num_actions) {
        throw std::invalid_argument("action index out of range at " + state_action(s, a));
      }
      if (k > 0 && actions[k - 1] == a) {
        throw std::invalid_argument("duplicate action at " + state_action(s, a));
      }
      double sum = 0.0;
      for (int t = 0; t < num_states; ++t) {
        const double p = kernel_[a](s, t);
        if (!(p >= 0.0)) {
          throw std::invalid_argument("negative transition probability at " + state_action(s, a));
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowSumTol) {
        throw std::invalid_argument("kernel row does not sum to 1 at " + state_action(s, a));
      }
    }
  }

  if (action_names_.empty()) {
    action_names_.reserve(static_cast<std::size_t>(num_actions));
    for (int a = 0; a < num_actions; ++a) action_names_.push_back("a" + std::to_string(a));
  } else if (static_cast<int>(action_names_.size()) != num_actions) {
    throw std::invalid_argument("action name count does not match action count");
  }

  if (state_labels_.empty()) {
    state_labels_.reserve(static_cast<std::size_t>(num_states));
    for (int s = 0; s < num_states; ++s) state_labels_.push_back(StateLabel{s, 0});
  } else if (static_cast<int>(state_labels_.size()) != num_states) {
    throw std::invalid_argument("state label count does not match state count");
  }

  num_machine_states_ = parts.num_machine_states;
  num_price_levels_ = parts.num_price_levels;
  if (num_machine_states_ == 0 || num_price_levels_ == 0) {
    int max_machine = 0;
    int max_price = 0;
    for (const auto& label : state_labels_) {
      max_machine = std::max(max_machine, label.machine_state);
      max_price = std::max(max_price, label.price_level);
    }
    if (num_machine_states_ == 0) num_machine_states_ = max_machine + 1;
    if (num_price_levels_ == 0) num_price_levels_ = max_price + 1;
  }
  if (num_machine_states_ * num_price_levels_ != num_states) {
    throw std::invalid_argument("machine x price factor sizes do not match state count");
  }

  expected_reward_.resize(static_cast<std::size_t>(num_actions));
  for (int a = 0; a < num_actions; ++a) {
    expected_reward_[a] = kernel_[a].cwiseProduct(reward_[a]).rowwise().sum();
  }
}

bool MdpModel::action_available(int s, int a) const {
  const auto& actions = available_[s];
  return std::binary_search(actions.begin(), actions.end(), a);
}

double MdpModel::expected_reward(int s, int a) const {
  if (s < 0 || s >= num_states()) throw std::invalid_argument("state index out of range");
  if (!action_available(s, a)) {
    throw std::invalid_argument("action " + std::to_string(a) + " unavailable in state " +
                                std::to_string(s));
  }
  return expected_reward_[a](s);
}

void validate_policy(const MdpModel& model, const Policy& policy) {
  if (static_cast<int>(policy.action.size()) != model.num_states()) {
    throw std::invalid_argument("policy length does not match state count");
  }
  for (int s = 0; s < model.num_states(); ++s) {
    if (!model.action_available(s, policy.action[s])) {
      throw std::invalid_argument("policy selects unavailable action " +
                                  std::to_string(policy.action[s]) + " in state " +
                                  std::to_string(s));
    }
  }
}

}  // namespace gridmdp
