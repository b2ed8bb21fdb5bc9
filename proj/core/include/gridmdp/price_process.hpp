#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace gridmdp {

/// Probability distribution over a finite index set. Entries are
/// non-negative and sum to one (within 1e-10); validated on construction.
class Distribution {
 public:
  explicit Distribution(Eigen::VectorXd probabilities);

  static Distribution uniform(Eigen::Index size);
  static Distribution point(Eigen::Index size, Eigen::Index index);

  const Eigen::VectorXd& probabilities() const { return probabilities_; }
  Eigen::Index size() const { return probabilities_.size(); }
  double operator[](Eigen::Index i) const { return probabilities_(i); }

 private:
  Eigen::VectorXd probabilities_;
};

/// Exogenous electricity price modeled as a finite Markov chain: an ordered
/// list of price levels plus a row-stochastic transition matrix whose entry
/// (i, j) is the probability of moving from level i to level j.
///
/// Invariants (validated on construction): levels strictly increasing, all
/// transition entries in [0, 1], every row summing to 1 within 1e-12.
class PriceChain {
 public:
  PriceChain(std::vector<double> levels, Eigen::MatrixXd transition);

  Eigen::Index num_levels() const { return transition_.rows(); }
  const std::vector<double>& levels() const { return levels_; }
  const Eigen::MatrixXd& transition() const { return transition_; }

 private:
  std::vector<double> levels_;
  Eigen::MatrixXd transition_;
};

/// Builds a birth-death price chain: from an interior level the price moves
/// one level up with probability `p_up`, one level down with `p_down`, and
/// stays put otherwise. At the boundary levels the unavailable move's mass
/// folds into the stay probability.
///
/// Throws std::invalid_argument if p_up + p_down > 1, either probability is
/// outside [0, 1], the level list is empty, or levels are not strictly
/// increasing.
PriceChain build_birth_death_chain(std::vector<double> levels, double p_up, double p_down);

/// Stationary distribution of an arbitrary row-stochastic matrix by power
/// iteration from `initial`, with a Cesaro (running-average) fallback so
/// periodic chains converge too. Returns the first iterate or average whose
/// L1 fixed-point residual drops to `tol`. For reducible chains the result
/// is the limit reached from `initial`.
///
/// Throws ConvergenceError (carrying the residual) after `max_iter` steps.
Distribution stationary_distribution(const Eigen::MatrixXd& transition, const Distribution& initial,
                                     double tol, std::size_t max_iter);

/// Stationary distribution of the price chain, iterated from uniform.
Distribution stationary_distribution(const PriceChain& chain, double tol = 1e-12,
                                     std::size_t max_iter = 1'000'000);

/// Long-run mean price: the stationary distribution dotted with the levels.
double expected_price(const PriceChain& chain);

}  // namespace gridmdp
