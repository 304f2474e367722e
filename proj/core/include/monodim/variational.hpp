#pragma once

#include <span>
#include <vector>

#include "monodim/distribution.hpp"

namespace monodim::variational {

struct ModelParams {
  double w;                // dimer coupling
  double fp_tol = 1e-12;   // fixed-point residual tolerance
  int max_iter = 200;
};

struct Bounds {
  double lower;
  double upper;
};

struct VariationalSolution {
  double xi_star;
  double pressure;         // value of the limit functional at xi_star
  double dimer_density;    // xi_star^2 / (2w), in (0, 1/2)
  double monomer_density;  // 1 - 2 * dimer_density
  double lower_bound;
  double upper_bound;
  int iterations;
  double residual;         // |xi_star - w E[1/(xi_star + x)]|
  bool endpoint_warning;   // iterate pinned at a bracket endpoint
};

/// Limit functional -xi^2/(2w) + E[log(xi + x)], xi >= 0.
double phi(double xi, const ModelParams& params,
           const ActivityDistribution& dist);

/// First derivative -xi/w + E[1/(xi + x)], xi > 0.
double phi_prime(double xi, const ModelParams& params,
                 const ActivityDistribution& dist);

/// Second derivative -1/w - E[1/(xi + x)^2]; strictly below -1/w.
double phi_double_prime(double xi, const ModelParams& params,
                        const ActivityDistribution& dist);

/// Rigorous bracket for the maximizer:
///   lower = max(Jensen bound, sup over a quantile grid of the
///               tail bound (-t + sqrt(t^2 + 4w P(x<=t))) / 2),
///   upper = min(sqrt(w), w E[1/x])  (sqrt(w) alone when E[1/x] = inf).
/// Every grid point yields a valid lower bound, so the grid only affects
/// tightness.
Bounds xi_star_bounds(const ModelParams& params,
                      const ActivityDistribution& dist);

/// Safeguarded Newton on g(xi) = xi - w E[1/(xi + x)] inside the
/// xi_star_bounds bracket (g is strictly increasing; bisection whenever a
/// Newton step leaves the bracket). Throws IterationLimitError with the best
/// iterate when max_iter is exhausted.
VariationalSolution solve_fixed_point(const ModelParams& params,
                                      const ActivityDistribution& dist);

struct CurvePoint {
  double w;
  VariationalSolution solution;
};

/// Solves per grid point; the grid must be strictly increasing. Points are
/// independent, so evaluation may be parallel; output order follows the grid.
std::vector<CurvePoint> pressure_curve(const ActivityDistribution& dist,
                                       std::span<const double> w_grid,
                                       double fp_tol = 1e-12,
                                       int max_iter = 200, int threads = 1);

}  // namespace monodim::variational
