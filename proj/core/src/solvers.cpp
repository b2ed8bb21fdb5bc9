#include "gridmdp/solvers.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gridmdp/errors.hpp"

namespace gridmdp {

namespace {

constexpr int kDirectSolveLimit = 4096;

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("gamma must lie strictly between 0 and 1");
  }
}

/// Per-action action-value table q_a = r_a + gamma * P_a v, reused by the
/// backup and the residual.
std::vector<Eigen::VectorXd> action_values(const MdpModel& model, const Eigen::VectorXd& v,
                                           double gamma) {
  std::vector<Eigen::VectorXd> q(static_cast<std::size_t>(model.num_actions()));
  for (int a = 0; a < model.num_actions(); ++a) {
    q[static_cast<std::size_t>(a)] =
        model.expected_reward_column(a) + gamma * (model.kernel(a) * v);
  }
  return q;
}

void greedy_from_action_values(const MdpModel& model, const std::vector<Eigen::VectorXd>& q,
                               Eigen::VectorXd& value, std::vector<int>& policy) {
  const int num_states = model.num_states();
  value.resize(num_states);
  policy.resize(static_cast<std::size_t>(num_states));
  for (int s = 0; s < num_states; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    int best_action = -1;
    for (int a : model.available_actions(s)) {
      const double qa = q[static_cast<std::size_t>(a)](s);
      if (qa > best) {
        best = qa;
        best_action = a;
      }
    }
    value(s) = best;
    policy[static_cast<std::size_t>(s)] = best_action;
  }
}

}  // namespace

std::pair<ValueFunction, Policy> bellman_backup(const MdpModel& model, const ValueFunction& v,
                                                double gamma) {
  check_gamma(gamma);
  if (v.value.size() != model.num_states()) {
    throw std::invalid_argument("value function length does not match state count");
  }
  const auto q = action_values(model, v.value, gamma);
  ValueFunction out;
  Policy policy;
  greedy_from_action_values(model, q, out.value, policy.action);
  return {std::move(out), std::move(policy)};
}

double bellman_residual(const MdpModel& model, const ValueFunction& v, double gamma) {
  const auto [backed, policy] = bellman_backup(model, v, gamma);
  return (backed.value - v.value).cwiseAbs().maxCoeff();
}

SolveResult value_iteration(const MdpModel& model, double gamma, double tol,
                            std::size_t max_iter) {
  check_gamma(gamma);
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

  const double stop = tol * (1.0 - gamma) / gamma;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(model.num_states());
  Eigen::VectorXd next;
  std::vector<int> policy;
  double span = std::numeric_limits<double>::infinity();

  for (std::size_t iter = 1; iter <= max_iter; ++iter) {
    const auto q = action_values(model, v, gamma);
    greedy_from_action_values(model, q, next, policy);
    const Eigen::VectorXd delta = next - v;
    const double lo = delta.minCoeff();
    const double hi = delta.maxCoeff();
    span = hi - lo;
    if (span <= stop) {
      // Center the remaining geometric tail: the true value lies within
      // gamma / (1 - gamma) * [lo, hi] of next, so shifting by the midpoint
      // makes fixed points exact and halves the certified error band.
      next.array() += gamma / (1.0 - gamma) * (hi + lo) / 2.0;
      SolveResult result;
      result.value.value = std::move(next);
      result.policy.action = std::move(policy);
      result.iterations = iter;
      result.residual = span;
      return result;
    }
    v.swap(next);
  }
  throw ConvergenceError("value iteration did not meet the span stopping rule", span, max_iter);
}

ValueFunction policy_evaluation(const MdpModel& model, const Policy& policy, double gamma,
                                double tol) {
  check_gamma(gamma);
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  validate_policy(model, policy);

  const int num_states = model.num_states();
  Eigen::MatrixXd p_pi(num_states, num_states);
  Eigen::VectorXd r_pi(num_states);
  for (int s = 0; s < num_states; ++s) {
    const int a = policy.action[static_cast<std::size_t>(s)];
    p_pi.row(s) = model.kernel(a).row(s);
    r_pi(s) = model.expected_reward_column(a)(s);
  }

  ValueFunction out;
  if (num_states <= kDirectSolveLimit) {
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(num_states, num_states) - gamma * p_pi;
    out.value = system.partialPivLu().solve(r_pi);
    return out;
  }

  const double stop = tol * (1.0 - gamma) / gamma;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(num_states);
  Eigen::VectorXd next(num_states);
  double span = std::numeric_limits<double>::infinity();
  constexpr std::size_t kMaxSweeps = 1'000'000;
  for (std::size_t iter = 1; iter <= kMaxSweeps; ++iter) {
    next.noalias() = r_pi + gamma * (p_pi * v);
    const Eigen::VectorXd delta = next - v;
    const double lo = delta.minCoeff();
    const double hi = delta.maxCoeff();
    span = hi - lo;
    if (span <= stop) {
      next.array() += gamma / (1.0 - gamma) * (hi + lo) / 2.0;
      out.value = std::move(next);
      return out;
    }
    v.swap(next);
  }
  throw ConvergenceError("policy evaluation did not converge", span, kMaxSweeps);
}

SolveResult policy_iteration(const MdpModel& model, double gamma) {
  check_gamma(gamma);

  const int num_states = model.num_states();
  Policy policy;
  policy.action.resize(static_cast<std::size_t>(num_states));
  for (int s = 0; s < num_states; ++s) {
    policy.action[static_cast<std::size_t>(s)] = model.available_actions(s).front();
  }

  const std::size_t guard = 10 * static_cast<std::size_t>(num_states);
  ValueFunction value;
  for (std::size_t iter = 1; iter <= guard; ++iter) {
    value = policy_evaluation(model, policy, gamma);
    auto [backed, improved] = bellman_backup(model, value, gamma);
    if (improved.action == policy.action) {
      SolveResult result;
      result.value = std::move(value);
      result.policy = std::move(policy);
      result.iterations = iter;
      result.residual = (backed.value - result.value.value).cwiseAbs().maxCoeff();
      return result;
    }
    policy = std::move(improved);
  }
  throw ConvergenceError("policy iteration cycled without stabilizing",
                         std::numeric_limits<double>::quiet_NaN(), guard);
}

}  // namespace gridmdp
