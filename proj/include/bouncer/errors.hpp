#pragma once

#include <stdexcept>
#include <string>

namespace bouncer {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to reach its target accuracy.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what, double best_estimate = 0.0,
                            double error_bound = 0.0)
      : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

/// Valid inputs for a configuration the model does not cover.
class UnsupportedConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The truncated eigenbasis cannot represent the requested state.
class InsufficientBasis : public NumericalFailure {
 public:
  InsufficientBasis(const std::string& what, double truncation_loss)
      : NumericalFailure(what, truncation_loss, 0.0) {}

  double truncation_loss() const noexcept { return best_estimate(); }
};

}  // namespace bouncer
