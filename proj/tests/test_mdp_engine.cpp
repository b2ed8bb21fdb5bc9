#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "gridmdp/errors.hpp"
#include "gridmdp/mdp.hpp"
#include "gridmdp/solvers.hpp"

using namespace gridmdp;

namespace {

/// Single state, two self-loop actions with constant rewards.
MdpModel two_action_loop(double reward0, double reward1) {
  MdpComponents parts;
  parts.available = {{0, 1}};
  parts.kernel = {Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1)};
  parts.reward = {Eigen::MatrixXd::Constant(1, 1, reward0),
                  Eigen::MatrixXd::Constant(1, 1, reward1)};
  return MdpModel(std::move(parts));
}

/// Two states: action 0 stays put (reward 0), action 1 jumps to the other
/// state (reward depends on the departing state).
MdpModel two_state_jump() {
  MdpComponents parts;
  parts.available = {{0, 1}, {0, 1}};
  Eigen::MatrixXd stay = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd jump(2, 2);
  jump << 0, 1, 1, 0;
  parts.kernel = {stay, jump};
  Eigen::MatrixXd reward_stay = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd reward_jump(2, 2);
  reward_jump << 0, 2, -1, 0;
  parts.reward = {reward_stay, reward_jump};
  return MdpModel(std::move(parts));
}

MdpModel random_mdp(std::mt19937_64& rng, int num_states, int num_actions) {
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  std::uniform_real_distribution<double> reward(-1.0, 1.0);
  std::bernoulli_distribution offered(0.7);

  MdpComponents parts;
  parts.kernel.assign(num_actions, Eigen::MatrixXd::Zero(num_states, num_states));
  parts.reward.assign(num_actions, Eigen::MatrixXd::Zero(num_states, num_states));
  parts.available.resize(num_states);
  for (int a = 0; a < num_actions; ++a) {
    for (int s = 0; s < num_states; ++s) {
      double sum = 0.0;
      for (int t = 0; t < num_states; ++t) {
        parts.kernel[a](s, t) = unit(rng);
        sum += parts.kernel[a](s, t);
        parts.reward[a](s, t) = reward(rng);
      }
      parts.kernel[a].row(s) /= sum;
    }
  }
  for (int s = 0; s < num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) {
      if (offered(rng)) parts.available[s].push_back(a);
    }
    if (parts.available[s].empty()) parts.available[s].push_back(rng() % num_actions);
  }
  return MdpModel(std::move(parts));
}

}  // namespace

TEST_CASE("model construction validates kernels and rewards") {
  MdpComponents parts;
  parts.available = {{0}};
  parts.kernel = {Eigen::MatrixXd::Constant(1, 1, 0.9)};
  parts.reward = {Eigen::MatrixXd::Zero(1, 1)};
  CHECK_THROWS_AS(MdpModel(std::move(parts)), std::invalid_argument);

  MdpComponents negative;
  negative.available = {{0}, {0}};
  Eigen::MatrixXd k(2, 2);
  k << 1.5, -0.5, 0.5, 0.5;
  negative.kernel = {k};
  negative.reward = {Eigen::MatrixXd::Zero(2, 2)};
  CHECK_THROWS_AS(MdpModel(std::move(negative)), std::invalid_argument);

  MdpComponents no_action;
  no_action.available = {{}};
  no_action.kernel = {Eigen::MatrixXd::Ones(1, 1)};
  no_action.reward = {Eigen::MatrixXd::Zero(1, 1)};
  CHECK_THROWS_AS(MdpModel(std::move(no_action)), std::invalid_argument);

  MdpComponents bad_reward;
  bad_reward.available = {{0}};
  bad_reward.kernel = {Eigen::MatrixXd::Ones(1, 1)};
  bad_reward.reward = {Eigen::MatrixXd::Constant(1, 1, std::numeric_limits<double>::infinity())};
  CHECK_THROWS_AS(MdpModel(std::move(bad_reward)), std::invalid_argument);

  MdpComponents bad_energy;
  bad_energy.available = {{0}};
  bad_energy.kernel = {Eigen::MatrixXd::Ones(1, 1)};
  bad_energy.reward = {Eigen::MatrixXd::Zero(1, 1)};
  bad_energy.energy = Eigen::MatrixXd::Zero(2, 1);
  CHECK_THROWS_AS(MdpModel(std::move(bad_energy)), std::invalid_argument);

  MdpComponents unsorted;
  unsorted.available = {{1, 0}};
  unsorted.kernel = {Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1)};
  unsorted.reward = {Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Zero(1, 1)};
  CHECK_THROWS_AS(MdpModel(std::move(unsorted)), std::invalid_argument);
}

TEST_CASE("unavailable rows are ignored by validation") {
  MdpComponents parts;
  parts.available = {{0}, {1}};
  Eigen::MatrixXd k0(2, 2);
  k0 << 1, 0, 5, 5;  // row 1 invalid but action 0 is unavailable there
  Eigen::MatrixXd k1(2, 2);
  k1 << 7, 7, 0, 1;
  parts.kernel = {k0, k1};
  parts.reward = {Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)};
  CHECK_NOTHROW(MdpModel(std::move(parts)));
}

TEST_CASE("expected reward and availability accessors") {
  const MdpModel model = two_state_jump();
  CHECK(model.num_states() == 2);
  CHECK(model.num_actions() == 2);
  CHECK(model.expected_reward(0, 1) == doctest::Approx(2.0));
  CHECK(model.expected_reward(1, 1) == doctest::Approx(-1.0));
  CHECK(model.expected_reward(0, 0) == doctest::Approx(0.0));
  CHECK(model.action_available(0, 1));
  CHECK(model.action_names()[1] == "a1");

  MdpComponents parts;
  parts.available = {{0}, {0, 1}};
  Eigen::MatrixXd stay = Eigen::MatrixXd::Identity(2, 2);
  parts.kernel = {stay, stay};
  parts.reward = {Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)};
  const MdpModel partial(std::move(parts));
  CHECK_THROWS_AS(partial.expected_reward(0, 1), std::invalid_argument);
}

TEST_CASE("policy validation rejects unavailable actions") {
  MdpComponents parts;
  parts.available = {{0}, {0, 1}};
  Eigen::MatrixXd stay = Eigen::MatrixXd::Identity(2, 2);
  parts.kernel = {stay, stay};
  parts.reward = {Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)};
  const MdpModel model(std::move(parts));

  CHECK_NOTHROW(validate_policy(model, Policy{{0, 1}}));
  CHECK_THROWS_AS(validate_policy(model, Policy{{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_policy(model, Policy{{0}}), std::invalid_argument);
}

TEST_CASE("bellman backup picks the best action and breaks ties low") {
  const MdpModel model = two_action_loop(1.0, 2.0);
  ValueFunction v;
  v.value = Eigen::VectorXd::Zero(1);
  const auto [backed, policy] = bellman_backup(model, v, 0.5);
  CHECK(backed.value(0) == doctest::Approx(2.0));
  CHECK(policy.action[0] == 1);

  const MdpModel tied = two_action_loop(3.0, 3.0);
  const auto [tied_value, tied_policy] = bellman_backup(tied, v, 0.5);
  CHECK(tied_policy.action[0] == 0);
}

TEST_CASE("value iteration reproduces fixed points exactly") {
  const MdpModel model = two_action_loop(1.0, 1.0);
  const SolveResult result = value_iteration(model, 0.5);
  CHECK(result.value.value(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(result.policy.action[0] == 0);
  CHECK(result.iterations >= 1);
}

TEST_CASE("value iteration rejects invalid inputs") {
  const MdpModel model = two_action_loop(1.0, 1.0);
  CHECK_THROWS_AS(value_iteration(model, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(value_iteration(model, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(value_iteration(model, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("value iteration reports non-convergence with the last span") {
  std::mt19937_64 rng(4);
  const MdpModel model = random_mdp(rng, 6, 3);
  try {
    value_iteration(model, 0.99, 1e-12, 2);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations() == 2);
    CHECK(e.residual() > 0.0);
  }
}

TEST_CASE("policy evaluation matches the hand-solved two-state chain") {
  const MdpModel model = two_state_jump();
  // Policy: jump from state 0 (reward 2), stay at state 1 (reward 0).
  // v(1) = 0, v(0) = 2 + gamma * v(1) = 2.
  const ValueFunction v = policy_evaluation(model, Policy{{1, 0}}, 0.9);
  CHECK(v.value(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(v.value(1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("policy evaluation satisfies its fixed-point equation on random models") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const MdpModel model = random_mdp(rng, 7, 3);
    Policy policy;
    for (int s = 0; s < model.num_states(); ++s) {
      const auto& actions = model.available_actions(s);
      policy.action.push_back(actions[rng() % actions.size()]);
    }
    const double gamma = 0.95;
    const ValueFunction v = policy_evaluation(model, policy, gamma);
    for (int s = 0; s < model.num_states(); ++s) {
      const int a = policy.action[s];
      const double rhs =
          model.expected_reward(s, a) + gamma * model.kernel(a).row(s).dot(v.value);
      CHECK(v.value(s) == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
}

TEST_CASE("policy iteration finds the optimal policy of the jump chain") {
  const MdpModel model = two_state_jump();
  const double gamma = 0.9;
  const SolveResult result = policy_iteration(model, gamma);
  // Cycling 0 -> 1 -> 0 earns 2 then pays 1 forever, which beats jumping
  // once and idling: v(0) = (2 - gamma) / (1 - gamma^2).
  CHECK(result.policy.action[0] == 1);
  CHECK(result.policy.action[1] == 1);
  CHECK(result.value.value(0) ==
        doctest::Approx((2.0 - gamma) / (1.0 - gamma * gamma)).epsilon(1e-12));
  CHECK(result.value.value(1) ==
        doctest::Approx((2.0 * gamma - 1.0) / (1.0 - gamma * gamma)).epsilon(1e-12));
  CHECK(bellman_residual(model, result.value, gamma) <= 1e-10);
}

TEST_CASE("value and policy iteration agree on random models") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const int m = 2 + static_cast<int>(rng() % 3);
    const MdpModel model = random_mdp(rng, n, m);
    const double gamma = 0.9;
    const SolveResult vi = value_iteration(model, gamma);
    const SolveResult pi = policy_iteration(model, gamma);
    CHECK(vi.policy.action == pi.policy.action);
    CHECK((vi.value.value - pi.value.value).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(bellman_residual(model, vi.value, gamma) <= 1e-8);
    CHECK(bellman_residual(model, pi.value, gamma) <= 1e-8);
  }
}

TEST_CASE("bellman backup is monotone and a gamma-contraction") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> unit(-5.0, 5.0);
  const MdpModel model = random_mdp(rng, 8, 3);
  const double gamma = 0.9;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd v(8), w(8);
    for (int i = 0; i < 8; ++i) {
      v(i) = unit(rng);
      w(i) = v(i) + std::abs(unit(rng));
    }
    const auto tv = bellman_backup(model, ValueFunction{v}, gamma).first.value;
    const auto tw = bellman_backup(model, ValueFunction{w}, gamma).first.value;
    CHECK((tw - tv).minCoeff() >= -1e-12);
    CHECK((tw - tv).cwiseAbs().maxCoeff() <= gamma * (w - v).cwiseAbs().maxCoeff() + 1e-12);
  }
}

TEST_CASE("adding a reward constant shifts values by its discounted sum") {
  std::mt19937_64 rng(808);
  const int n = 6;
  const int m = 3;
  const double gamma = 0.9;
  const double shift = 0.7;

  std::uniform_real_distribution<double> unit(0.01, 1.0);
  std::uniform_real_distribution<double> reward(-1.0, 1.0);
  MdpComponents base;
  base.kernel.assign(m, Eigen::MatrixXd::Zero(n, n));
  base.reward.assign(m, Eigen::MatrixXd::Zero(n, n));
  base.available.assign(n, {0, 1, 2});
  for (int a = 0; a < m; ++a) {
    for (int s = 0; s < n; ++s) {
      double sum = 0.0;
      for (int t = 0; t < n; ++t) {
        base.kernel[a](s, t) = unit(rng);
        sum += base.kernel[a](s, t);
        base.reward[a](s, t) = reward(rng);
      }
      base.kernel[a].row(s) /= sum;
    }
  }
  MdpComponents shifted = base;
  for (int a = 0; a < m; ++a) shifted.reward[a].array() += shift;

  const SolveResult original = value_iteration(MdpModel(std::move(base)), gamma);
  const SolveResult moved = value_iteration(MdpModel(std::move(shifted)), gamma);
  CHECK(original.policy.action == moved.policy.action);
  const double expected_shift = shift / (1.0 - gamma);
  CHECK((moved.value.value - original.value.value - Eigen::VectorXd::Constant(n, expected_shift))
            .cwiseAbs()
            .maxCoeff() <= 1e-7);
}
