#include "monodim/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "monodim/errors.hpp"
#include "monodim/parallel.hpp"

namespace monodim::variational {

namespace {

void validate(const ModelParams& params) {
  if (!(params.w > 0.0)) throw std::invalid_argument("requires w > 0");
  if (!(params.fp_tol > 0.0)) throw std::invalid_argument("requires fp_tol > 0");
  if (params.max_iter < 1) throw std::invalid_argument("requires max_iter >= 1");
}

// Expectations inside the solver run tighter than the distribution default so
// quadrature noise stays below the fixed-point tolerance.
double solver_tol(const ActivityDistribution& dist, double fp_tol) {
  return std::clamp(0.01 * fp_tol, 1e-15, dist.quadrature_tol());
}

double mean_inverse_shifted(double xi, const ActivityDistribution& dist,
                            double rel_tol) {
  return dist.expect([xi](double x) { return 1.0 / (xi + x); }, rel_tol);
}

}  // namespace

double phi(double xi, const ModelParams& params,
           const ActivityDistribution& dist) {
  validate(params);
  if (!(xi >= 0.0)) throw std::invalid_argument("phi: requires xi >= 0");
  // At xi = 0 the expectation is E[log x], which has a closed form.
  const double expectation =
      xi == 0.0 ? dist.log_mean()
                : dist.expect([xi](double x) { return std::log(xi + x); });
  return -xi * xi / (2.0 * params.w) + expectation;
}

double phi_prime(double xi, const ModelParams& params,
                 const ActivityDistribution& dist) {
  validate(params);
  if (!(xi > 0.0)) throw std::invalid_argument("phi_prime: requires xi > 0");
  return -xi / params.w +
         dist.expect([xi](double x) { return 1.0 / (xi + x); });
}

double phi_double_prime(double xi, const ModelParams& params,
                        const ActivityDistribution& dist) {
  validate(params);
  if (!(xi > 0.0)) {
    throw std::invalid_argument("phi_double_prime: requires xi > 0");
  }
  return -1.0 / params.w - dist.expect([xi](double x) {
    const double s = xi + x;
    return 1.0 / (s * s);
  });
}

Bounds xi_star_bounds(const ModelParams& params,
                      const ActivityDistribution& dist) {
  validate(params);
  const double w = params.w;

  const double mean = dist.mean();
  double lower = 0.5 * (-mean + std::sqrt(mean * mean + 4.0 * w));

  // Tail bound evaluated on a quantile grid; each point is individually
  // valid, so coarseness costs tightness only.
  constexpr int kGridPoints = 64;
  for (int i = 1; i <= kGridPoints; ++i) {
    const double p = 0.01 + 0.98 * (i - 1) / (kGridPoints - 1);
    const double t = dist.quantile(p);
    const double mass = dist.cdf(t);
    if (mass <= 0.0) continue;
    const double candidate =
        0.5 * (-t + std::sqrt(t * t + 4.0 * w * mass));
    lower = std::max(lower, candidate);
  }

  double upper = std::sqrt(w);
  if (dist.inv_mean_finite()) {
    upper = std::min(upper, w * dist.inv_mean());
  }
  lower = std::min(lower, upper);
  return {lower, upper};
}

VariationalSolution solve_fixed_point(const ModelParams& params,
                                      const ActivityDistribution& dist) {
  validate(params);
  const double w = params.w;
  const double rel_tol = solver_tol(dist, params.fp_tol);
  const Bounds bracket = xi_star_bounds(params, dist);

  // g(xi) = xi - w E[1/(xi+x)] is strictly increasing with a root at the
  // maximizer; g' = 1 + w E[1/(xi+x)^2].
  auto g = [&](double xi) {
    return xi - w * mean_inverse_shifted(xi, dist, rel_tol);
  };
  auto g_prime = [&](double xi) {
    return 1.0 + w * dist.expect(
                         [xi](double x) {
                           const double s = xi + x;
                           return 1.0 / (s * s);
                         },
                         rel_tol);
  };

  double lo = bracket.lower;
  double hi = bracket.upper;
  double xi = 0.5 * (lo + hi);
  double residual = g(xi);
  int iterations = 0;

  while (std::abs(residual) > params.fp_tol && iterations < params.max_iter) {
    ++iterations;
    if (residual > 0.0) {
      hi = std::min(hi, xi);
    } else {
      lo = std::max(lo, xi);
    }
    double next = xi - residual / g_prime(xi);
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);  // bisection safeguard
    }
    if (next == xi) break;  // bracket collapsed to machine resolution
    xi = next;
    residual = g(xi);
  }

  if (std::abs(residual) > params.fp_tol) {
    throw IterationLimitError(
        "solve_fixed_point: residual " + std::to_string(std::abs(residual)) +
            " above tolerance after " + std::to_string(iterations) +
            " iterations",
        xi, std::abs(residual));
  }

  VariationalSolution out;
  out.xi_star = xi;
  out.pressure = phi(xi, params, dist);
  out.dimer_density = xi * xi / (2.0 * w);
  out.monomer_density = 1.0 - 2.0 * out.dimer_density;
  out.lower_bound = bracket.lower;
  out.upper_bound = bracket.upper;
  out.iterations = iterations;
  out.residual = std::abs(residual);
  // Converging exactly onto an endpoint is fine (the Jensen bound is tight
  // for a point mass); a pinned iterate that still misses the tolerance is
  // flagged by the exception above, so here only the degenerate geometry is
  // reported.
  out.endpoint_warning =
      (xi <= bracket.lower || xi >= bracket.upper) &&
      (bracket.upper - bracket.lower) >
          16.0 * std::numeric_limits<double>::epsilon() * bracket.upper &&
      !dist.is_atomic();
  return out;
}

std::vector<CurvePoint> pressure_curve(const ActivityDistribution& dist,
                                       std::span<const double> w_grid,
                                       double fp_tol, int max_iter,
                                       int threads) {
  if (w_grid.empty()) {
    throw std::invalid_argument("pressure_curve: empty w grid");
  }
  for (std::size_t i = 0; i < w_grid.size(); ++i) {
    if (!(w_grid[i] > 0.0)) {
      throw std::invalid_argument("pressure_curve: w values must be > 0");
    }
    if (i > 0 && !(w_grid[i] > w_grid[i - 1])) {
      throw std::invalid_argument(
          "pressure_curve: w grid must be strictly increasing");
    }
  }

  std::vector<CurvePoint> out(w_grid.size());
  parallel_for(w_grid.size(), threads, [&](std::size_t i) {
    ModelParams params{w_grid[i], fp_tol, max_iter};
    try {
      out[i] = CurvePoint{w_grid[i], solve_fixed_point(params, dist)};
    } catch (const std::exception& err) {
      throw std::runtime_error("pressure_curve: at w = " +
                               std::to_string(w_grid[i]) + ": " + err.what());
    }
  });
  return out;
}

}  // namespace monodim::variational
