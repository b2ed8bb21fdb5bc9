#include "gridmdp/price_process.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "gridmdp/errors.hpp"

namespace gridmdp {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kDistSumTol = 1e-10;

void check_stochastic(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument("transition matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double p = m(i, j);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("transition entry (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ") outside [0, 1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTol) {
      throw std::invalid_argument("transition row " + std::to_string(i) +
                                  " sums to " + std::to_string(sum) + ", not 1");
    }
  }
}

}  // namespace

Distribution::Distribution(Eigen::VectorXd probabilities) : probabilities_(std::move(probabilities)) {
  if (probabilities_.size() == 0) {
    throw std::invalid_argument("distribution must be non-empty");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < probabilities_.size(); ++i) {
    if (!(probabilities_(i) >= 0.0)) {
      throw std::invalid_argument("distribution entry " + std::to_string(i) + " is negative");
    }
    sum += probabilities_(i);
  }
  if (std::abs(sum - 1.0) > kDistSumTol) {
    throw std::invalid_argument("distribution sums to " + std::to_string(sum) + ", not 1");
  }
}

Distribution Distribution::uniform(Eigen::Index size) {
  if (size <= 0) throw std::invalid_argument("distribution must be non-empty");
  return Distribution(Eigen::VectorXd::Constant(size, 1.0 / static_cast<double>(size)));
}

Distribution Distribution::point(Eigen::Index size, Eigen::Index index) {
  if (index < 0 || index >= size) {
    throw std::invalid_argument("point-mass index " + std::to_string(index) + " out of range");
  }
  Eigen::VectorXd p = Eigen::VectorXd::Zero(size);
  p(index) = 1.0;
  return Distribution(std::move(p));
}

PriceChain::PriceChain(std::vector<double> levels, Eigen::MatrixXd transition)
    : levels_(std::move(levels)), transition_(std::move(transition)) {
  if (levels_.empty()) throw std::invalid_argument("price chain needs at least one level");
  if (static_cast<Eigen::Index>(levels_.size()) != transition_.rows()) {
    throw std::invalid_argument("level count does not match transition dimension");
  }
  for (std::size_t i = 1; i < levels_.size(); ++i) {
    if (!(levels_[i] > levels_[i - 1])) {
      throw std::invalid_argument("price levels must be strictly increasing");
    }
  }
  check_stochastic(transition_);
}

PriceChain build_birth_death_chain(std::vector<double> levels, double p_up, double p_down) {
  if (!(p_up >= 0.0 && p_up <= 1.0) || !(p_down >= 0.0 && p_down <= 1.0)) {
    throw std::invalid_argument("p_up and p_down must lie in [0, 1]");
  }
  if (p_up + p_down > 1.0) {
    throw std::invalid_argument("p_up + p_down = " + std::to_string(p_up + p_down) +
                                " exceeds 1");
  }
  if (levels.empty()) throw std::invalid_argument("price chain needs at least one level");

  const Eigen::Index n = static_cast<Eigen::Index>(levels.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double up = (i + 1 < n) ? p_up : 0.0;
    const double down = (i > 0) ? p_down : 0.0;
    if (i > 0) t(i, i - 1) = down;
    if (i + 1 < n) t(i, i + 1) = up;
    t(i, i) = 1.0 - up - down;  // boundary rows absorb the unavailable move
  }
  return PriceChain(std::move(levels), std::move(t));
}

Distribution stationary_distribution(const Eigen::MatrixXd& transition, const Distribution& initial,
                                     double tol, std::size_t max_iter) {
  check_stochastic(transition);
  if (initial.size() != transition.rows()) {
    throw std::invalid_argument("initial distribution does not match transition dimension");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

  // Row vector iteration p <- p T. The raw iterate settles geometrically on
  // aperiodic chains; the running (Cesaro) average is checked as a fallback
  // that also converges on periodic inputs. Averaging restarts on doubling
  // windows so early transients do not linger in the estimate.
  Eigen::VectorXd p = initial.probabilities();
  Eigen::VectorXd next(p.size());
  Eigen::VectorXd avg_sum = Eigen::VectorXd::Zero(p.size());
  std::size_t avg_count = 0;
  std::size_t window = 16;
  double residual = std::numeric_limits<double>::infinity();

  for (std::size_t iter = 0; iter <= max_iter; ++iter) {
    next.noalias() = transition.transpose() * p;
    residual = (next - p).cwiseAbs().sum();
    if (residual <= tol) {
      p /= p.sum();
      return Distribution(std::move(p));
    }

    avg_sum += p;
    ++avg_count;
    if (avg_count == window) {
      Eigen::VectorXd avg = avg_sum / static_cast<double>(avg_count);
      avg /= avg.sum();
      const double avg_residual = (transition.transpose() * avg - avg).cwiseAbs().sum();
      if (avg_residual <= tol) {
        return Distribution(std::move(avg));
      }
      avg_sum.setZero();
      avg_count = 0;
      window *= 2;
    }

    p.swap(next);
  }
  throw ConvergenceError("stationary distribution did not converge", residual, max_iter);
}

Distribution stationary_distribution(const PriceChain& chain, double tol, std::size_t max_iter) {
  return stationary_distribution(chain.transition(), Distribution::uniform(chain.num_levels()),
                                 tol, max_iter);
}

double expected_price(const PriceChain& chain) {
  const Distribution pi = stationary_distribution(chain);
  double mean = 0.0;
  for (Eigen::Index i = 0; i < chain.num_levels(); ++i) {
    mean += pi[i] * chain.levels()[static_cast<std::size_t>(i)];
  }
  return mean;
}

}  // namespace gridmdp
