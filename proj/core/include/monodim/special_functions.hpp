#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace monodim {

/// psi(x) = d/dx log Gamma(x), x > 0.
double digamma(double x);

/// psi'(x), x > 0.
double trigamma(double x);

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a),
/// a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

/// Standard normal CDF.
double normal_cdf(double z);

/// log(exp(a) + exp(b)) without overflow; -inf inputs behave as exp = 0.
double log_add_exp(double a, double b);

/// Pairwise (tree) sum; error grows like log n instead of n.
double pairwise_sum(std::span<const double> values);

/// log-sum-exp over a vector of log-magnitudes, pairwise-summed after the
/// max shift.
double log_sum_exp(std::span<const double> log_terms);

/// Table of log((2k-1)!!) for k = 0..k_max; entry k is the log of the number
/// of perfect pairings of 2k labeled elements (log 1 = 0 at k = 0).
std::vector<double> log_odd_double_factorial_table(std::size_t k_max);

}  // namespace monodim
