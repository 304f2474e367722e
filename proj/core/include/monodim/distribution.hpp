#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "monodim/random.hpp"

namespace monodim {

enum class DistKind { dirac, uniform, log_normal, gamma, exponential, discrete };

struct DiscreteAtom {
  double value;
  double prob;
};

/// Law of a positive monomer activity, with every expectation the
/// variational formulas consume.
///
/// All six kinds have finite mean and finite E[(log x)^2]; E[1/x] is finite
/// except for exponential and gamma with shape <= 1 (those kinds are still
/// constructible, but inv_mean() raises DivergentMomentError).
///
/// Moments use closed forms where the kind admits them; the generic
/// expect(f) falls back to adaptive Gauss-Kronrod panels on the support,
/// split at the density's peak, for continuous kinds. Values are immutable
/// after construction and safe to share across threads.
class ActivityDistribution {
 public:
  static ActivityDistribution dirac(double point);
  static ActivityDistribution uniform(double a, double b);
  static ActivityDistribution log_normal(double mu, double sigma);
  static ActivityDistribution gamma(double shape, double scale);
  static ActivityDistribution exponential(double rate);
  static ActivityDistribution discrete(std::vector<DiscreteAtom> atoms);

  DistKind kind() const;
  std::string name() const;

  double quadrature_tol() const { return quadrature_tol_; }
  void set_quadrature_tol(double tol);

  double mean() const;
  /// E[1/x]; throws DivergentMomentError when infinite.
  double inv_mean() const;
  bool inv_mean_finite() const;
  double log_mean() const;
  double log_sq_mean() const;

  /// P(x <= t).
  double cdf(double t) const;
  /// Smallest t with cdf(t) >= p, p in (0, 1).
  double quantile(double p) const;

  /// E[f(x)] at the distribution's quadrature tolerance (exact weighted sum
  /// for atomic kinds).
  double expect(const std::function<double(double)>& f) const;
  double expect(const std::function<double(double)>& f, double rel_tol) const;

  /// Density at x (continuous kinds only).
  double pdf(double x) const;
  bool is_atomic() const;

  double sample_one(RandomStream& stream) const;
  std::vector<double> sample(std::size_t n, RandomStream& stream) const;

 private:
  struct DiracParams {
    double point;
  };
  struct UniformParams {
    double a, b;
  };
  struct LogNormalParams {
    double mu, sigma;
  };
  struct GammaParams {
    double shape, scale;
  };
  struct ExponentialParams {
    double rate;
  };
  struct DiscreteParams {
    std::vector<DiscreteAtom> atoms;  // sorted by value
  };

  using Params = std::variant<DiracParams, UniformParams, LogNormalParams,
                              GammaParams, ExponentialParams, DiscreteParams>;

  explicit ActivityDistribution(Params params) : params_(std::move(params)) {}

  double quadrature_split_point() const;
  double sample_gamma(double shape, double scale, RandomStream& stream) const;

  Params params_;
  double quadrature_tol_ = 1e-10;
};

}  // namespace monodim
