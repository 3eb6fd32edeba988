#pragma once

#include <stdexcept>
#include <string>

namespace spincollapse {

// Caller violated an operation precondition (bad site index, dimension
// mismatch, i == j in a pair term).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid or unsupported configuration. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::string key = {})
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// An iterative solver did not reach its tolerance. CLI exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

// Norm or conserved-energy drift beyond tolerance during evolution.
// CLI exit code 4.
class IntegrityError : public std::runtime_error {
 public:
  IntegrityError(const std::string& what, long step, double drift)
      : std::runtime_error(what), step_(step), drift_(drift) {}
  long step() const noexcept { return step_; }
  double drift() const noexcept { return drift_; }

 private:
  long step_;
  double drift_;
};

}  // namespace spincollapse
