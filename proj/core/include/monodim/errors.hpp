#pragma once

#include <stdexcept>
#include <string>

namespace monodim {

/// A requested moment does not exist for the distribution (e.g. E[1/x] with
/// too much mass near zero).
class DivergentMomentError : public std::runtime_error {
 public:
  explicit DivergentMomentError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Adaptive quadrature exhausted its panel budget above the tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double error_estimate)
      : std::runtime_error(what), error_estimate_(error_estimate) {}
  double error_estimate() const { return error_estimate_; }

 private:
  double error_estimate_;
};

/// An exact engine was asked for an instance above its size budget.
class SizeBudgetError : public std::runtime_error {
 public:
  explicit SizeBudgetError(const std::string& what)
      : std::runtime_error(what) {}
};

/// An iterative solver ran out of iterations before meeting its tolerance.
class IterationLimitError : public std::runtime_error {
 public:
  IterationLimitError(const std::string& what, double best_estimate,
                      double residual)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        residual_(residual) {}
  double best_estimate() const { return best_estimate_; }
  double residual() const { return residual_; }

 private:
  double best_estimate_;
  double residual_;
};

/// Floating-point cancellation destroyed the result (signed log-sum-exp
/// collapsed to a non-positive total).
class PrecisionLossError : public std::runtime_error {
 public:
  explicit PrecisionLossError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace monodim
