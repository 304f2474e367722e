#pragma once

#include <functional>
#include <vector>

namespace monodim {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  /// Subdivision budget; exceeding it raises QuadratureError.
  int max_panels = 10000;
};

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
///
/// Panels are kept in a worst-error heap and split until the total error
/// estimate drops below rel_tol relative to the accumulated integral
/// (floored by a small fraction of the L1 mass, so near-cancelling
/// integrands terminate too).
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    const QuadratureOptions& opts = {});

/// Same, over [a, +inf); the tail is mapped onto a finite panel via
/// x = a + u/(1-u).
QuadratureResult integrate_adaptive_to_infinity(
    const std::function<double(double)>& f, double a,
    const QuadratureOptions& opts = {});

struct GaussHermiteRule {
  /// Nodes and weights for weight function exp(-t^2) on the real line;
  /// sum of weights is sqrt(pi). Exact for polynomials up to degree 2n-1.
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Largest order whose extreme-node weights stay normal in double precision.
inline constexpr int kMaxGaussHermiteOrder = 370;

/// Gauss-Hermite rule of order n (Newton iteration on the orthonormal
/// Hermite recurrence; standard initial guesses). Orders above
/// kMaxGaussHermiteOrder are rejected.
GaussHermiteRule gauss_hermite_rule(int n);

}  // namespace monodim
