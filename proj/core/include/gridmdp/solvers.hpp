#pragma once

#include <cstddef>
#include <utility>

#include "gridmdp/mdp.hpp"

namespace gridmdp {

/// Output of an optimizing solver: the value estimate, the greedy policy,
/// the iteration count, and the final stopping residual.
struct SolveResult {
  ValueFunction value;
  Policy policy;
  std::size_t iterations = 0;
  double residual = 0.0;
};

/// One Bellman optimality update: for every state, the maximum over
/// available actions of expected reward plus gamma times the expected
/// continuation value, together with the argmax policy. Ties are broken
/// toward the lowest action index.
std::pair<ValueFunction, Policy> bellman_backup(const MdpModel& model, const ValueFunction& v,
                                                double gamma);

/// Sup-norm distance between `v` and its Bellman backup; zero exactly at the
/// optimal value function.
double bellman_residual(const MdpModel& model, const ValueFunction& v, double gamma);

/// Value iteration from v = 0 with the span-seminorm stopping rule: stops
/// once sp(v_{k+1} - v_k) <= tol * (1 - gamma) / gamma, which certifies the
/// greedy policy is tol-optimal. The returned value adds the midpoint
/// correction gamma / (1 - gamma) * mid(v_{k+1} - v_k), so fixed points are
/// reproduced exactly (a single self-loop of reward r yields r / (1 - gamma)).
///
/// Throws std::invalid_argument unless 0 < gamma < 1, and ConvergenceError
/// if the rule is not met within max_iter sweeps.
SolveResult value_iteration(const MdpModel& model, double gamma, double tol = 1e-10,
                            std::size_t max_iter = 1'000'000);

/// Value of a fixed policy: solves v = r_pi + gamma * P_pi v, directly (LU)
/// for models up to a few thousand states and by fixed-point iteration with
/// tolerance `tol` beyond that.
ValueFunction policy_evaluation(const MdpModel& model, const Policy& policy, double gamma,
                                double tol = 1e-10);

/// Howard policy iteration: alternate exact evaluation and greedy
/// improvement (lowest-index tie-break) until the policy is stable. The
/// guard limit of 10 * num_states sweeps cannot trigger for a well-formed
/// model but turns a would-be cycle into ConvergenceError.
SolveResult policy_iteration(const MdpModel& model, double gamma);

}  // namespace gridmdp
