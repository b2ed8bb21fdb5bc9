#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gridmdp {

/// Thrown when an iterative solver exhausts its iteration budget without
/// reaching the requested tolerance. Carries the last observed residual.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, std::size_t iterations)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + " after " +
                           std::to_string(iterations) + " iterations)"),
        residual_(residual),
        iterations_(iterations) {}

  double residual() const { return residual_; }
  std::size_t iterations() const { return iterations_; }

 private:
  double residual_;
  std::size_t iterations_;
};

/// Configuration rejected: malformed document, unknown key, or a violated
/// parameter constraint. The message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure while reading a config or writing output tables.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gridmdp
