#include "monodim/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "monodim/errors.hpp"
#include "monodim/quadrature.hpp"
#include "monodim/special_functions.hpp"

namespace monodim::exact {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Cancellation threshold: half of the 53-bit mantissa, in nats.
const double kHalfMantissaNats = 0.5 * 53.0 * std::log(2.0);

void validate_activities(const std::vector<double>& activities) {
  if (activities.empty()) {
    throw std::invalid_argument("model requires at least one vertex");
  }
  for (double x : activities) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("activities must be positive and finite");
    }
  }
}

int pick_pivot(std::uint32_t mask, PivotRule rule) {
  if (rule == PivotRule::lowest_index) return std::countr_zero(mask);
  return 31 - std::countl_zero(mask);
}

}  // namespace

WeightedGraph::WeightedGraph(std::vector<double> activities)
    : n_(static_cast<int>(activities.size())),
      activities_(std::move(activities)),
      weights_(static_cast<std::size_t>(n_) * n_, 0.0) {
  validate_activities(activities_);
}

WeightedGraph WeightedGraph::complete(std::vector<double> activities,
                                      double total_coupling) {
  if (!(total_coupling > 0.0)) {
    throw std::invalid_argument("complete: total coupling must be > 0");
  }
  WeightedGraph g(std::move(activities));
  const double per_edge = total_coupling / g.size();
  for (int i = 0; i < g.size(); ++i) {
    for (int j = i + 1; j < g.size(); ++j) {
      g.set_edge(i, j, per_edge);
    }
  }
  return g;
}

void WeightedGraph::set_edge(int i, int j, double weight) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw std::out_of_range("set_edge: vertex index out of range");
  }
  if (i == j) throw std::invalid_argument("set_edge: self-edges not allowed");
  if (!(weight >= 0.0)) {
    throw std::invalid_argument("set_edge: weight must be >= 0");
  }
  weights_[static_cast<std::size_t>(i) * n_ + j] = weight;
  weights_[static_cast<std::size_t>(j) * n_ + i] = weight;
}

double WeightedGraph::edge(int i, int j) const {
  return weights_[static_cast<std::size_t>(i) * n_ + j];
}

namespace {

// Subset-memoized deletion recursion. Flat table below 21 vertices, hash map
// above (reachable states are sparse there).
struct HlContext {
  const WeightedGraph& graph;
  PivotRule pivot;
  bool log_domain;
  std::vector<double> flat;
  std::unordered_map<std::uint32_t, double> map;
  bool use_flat;

  HlContext(const WeightedGraph& g, PivotRule p, bool log_dom)
      : graph(g), pivot(p), log_domain(log_dom) {
    use_flat = g.size() <= 20;
    if (use_flat) {
      flat.assign(std::size_t{1} << g.size(),
                  std::numeric_limits<double>::quiet_NaN());
    }
  }

  double* find(std::uint32_t mask) {
    if (use_flat) {
      return std::isnan(flat[mask]) ? nullptr : &flat[mask];
    }
    auto it = map.find(mask);
    return it == map.end() ? nullptr : &it->second;
  }

  void store(std::uint32_t mask, double value) {
    if (use_flat) {
      flat[mask] = value;
    } else {
      map.emplace(mask, value);
    }
  }
};

double hl_recurse(std::uint32_t mask, HlContext& ctx) {
  if (mask == 0) return ctx.log_domain ? 0.0 : 1.0;
  if (double* hit = ctx.find(mask)) return *hit;

  const int i = pick_pivot(mask, ctx.pivot);
  const std::uint32_t without_i = mask & ~(std::uint32_t{1} << i);

  double z;
  if (ctx.log_domain) {
    z = std::log(ctx.graph.activity(i)) + hl_recurse(without_i, ctx);
    for (std::uint32_t rest = without_i; rest != 0; rest &= rest - 1) {
      const int j = std::countr_zero(rest);
      const double w = ctx.graph.edge(i, j);
      if (w > 0.0) {
        z = log_add_exp(
            z, std::log(w) +
                   hl_recurse(without_i & ~(std::uint32_t{1} << j), ctx));
      }
    }
  } else {
    z = ctx.graph.activity(i) * hl_recurse(without_i, ctx);
    for (std::uint32_t rest = without_i; rest != 0; rest &= rest - 1) {
      const int j = std::countr_zero(rest);
      const double w = ctx.graph.edge(i, j);
      if (w > 0.0) {
        z += w * hl_recurse(without_i & ~(std::uint32_t{1} << j), ctx);
      }
    }
  }
  ctx.store(mask, z);
  return z;
}

double hl_dispatch(const WeightedGraph& graph, PivotRule pivot,
                   int max_vertices, bool log_domain) {
  if (max_vertices > 24) max_vertices = 24;
  if (graph.size() > max_vertices) {
    throw SizeBudgetError("hl_partition: " + std::to_string(graph.size()) +
                          " vertices exceed the subset budget of " +
                          std::to_string(max_vertices));
  }
  HlContext ctx(graph, pivot, log_domain);
  const std::uint32_t full = (std::uint32_t{1} << graph.size()) - 1;
  return hl_recurse(full, ctx);
}

}  // namespace

double hl_partition(const WeightedGraph& graph, PivotRule pivot,
                    int max_vertices) {
  return hl_dispatch(graph, pivot, max_vertices, /*log_domain=*/false);
}

double hl_log_partition(const WeightedGraph& graph, PivotRule pivot,
                        int max_vertices) {
  return hl_dispatch(graph, pivot, max_vertices, /*log_domain=*/true);
}

double wick_partition(int n, const std::vector<double>& covariance,
                      const std::vector<double>& activities,
                      int max_vertices) {
  if (n < 1) throw std::invalid_argument("wick_partition: requires n >= 1");
  max_vertices = std::min(max_vertices, 24);
  if (n > max_vertices) {
    throw SizeBudgetError(
        "wick_partition: " + std::to_string(n) +
        " vertices exceed the pair-partition budget of " +
        std::to_string(max_vertices));
  }
  if (covariance.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("wick_partition: covariance must be n*n");
  }
  if (activities.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("wick_partition: activities must have size n");
  }

  const std::uint32_t size = std::uint32_t{1} << n;

  // pairing_sum[mask] = sum over perfect pairings of the mask of the product
  // of covariances; 0 for odd masks, 1 for the empty mask. Matching the
  // lowest remaining element against every partner enumerates each pairing
  // exactly once.
  std::vector<double> pairing_sum(size, 0.0);
  pairing_sum[0] = 1.0;
  for (std::uint32_t mask = 1; mask < size; ++mask) {
    if (std::popcount(mask) % 2 != 0) continue;
    const int i = std::countr_zero(mask);
    const std::uint32_t without_i = mask & ~(std::uint32_t{1} << i);
    double sum = 0.0;
    for (std::uint32_t rest = without_i; rest != 0; rest &= rest - 1) {
      const int j = std::countr_zero(rest);
      const double w = covariance[static_cast<std::size_t>(i) * n + j];
      if (w != 0.0) {
        sum += w * pairing_sum[without_i & ~(std::uint32_t{1} << j)];
      }
    }
    pairing_sum[mask] = sum;
  }

  double total = 0.0;
  for (std::uint32_t mask = 0; mask < size; ++mask) {
    const double pairings = pairing_sum[mask];
    if (pairings == 0.0) continue;
    double monomers = 1.0;
    for (int i = 0; i < n; ++i) {
      if (!(mask & (std::uint32_t{1} << i))) monomers *= activities[i];
    }
    total += pairings * monomers;
  }
  return total;
}

double wick_partition(const WeightedGraph& graph, int max_vertices) {
  const int n = graph.size();
  std::vector<double> covariance(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) covariance[static_cast<std::size_t>(i) * n + j] =
          graph.edge(i, j);
    }
  }
  return wick_partition(n, covariance, graph.activities(), max_vertices);
}

namespace {

void validate_instance(const CompleteModelInstance& instance,
                       int max_vertices, const char* who) {
  validate_activities(instance.activities);
  if (!(instance.w > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": requires w > 0");
  }
  if (instance.size() > max_vertices) {
    throw SizeBudgetError(std::string(who) + ": " +
                          std::to_string(instance.size()) +
                          " vertices exceed the budget of " +
                          std::to_string(max_vertices));
  }
}

// log e_k(x) for k = 0..n via the standard one-vertex-at-a-time DP, carried
// in log domain (every term is positive).
std::vector<double> log_elementary_symmetric(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  std::vector<double> level(n + 1, -kInf);
  level[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]);
    for (std::size_t k = i + 1; k >= 1; --k) {
      const double cand = lx + level[k - 1];
      const double cur = level[k];
      if (cur == -kInf) {
        level[k] = cand;
      } else if (cur >= cand) {
        level[k] = cur + std::log1p(std::exp(cand - cur));
      } else {
        level[k] = cand + std::log1p(std::exp(cur - cand));
      }
    }
  }
  return level;
}

// Log-terms of the symmetric closed form, indexed by pair count k (the term
// covers configurations with m = 2k matched vertices).
std::vector<double> symmetric_log_terms(const CompleteModelInstance& instance) {
  const int n = instance.size();
  const auto log_e = log_elementary_symmetric(instance.activities);
  const auto log_df = log_odd_double_factorial_table(n / 2);
  const double log_edge = std::log(instance.w / n);

  std::vector<double> terms(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) {
    terms[k] = k * log_edge + log_df[k] + log_e[n - 2 * k];
  }
  return terms;
}

}  // namespace

double symmetric_log_partition(const CompleteModelInstance& instance,
                               int max_vertices) {
  validate_instance(instance, max_vertices, "symmetric_log_partition");
  const auto terms = symmetric_log_terms(instance);
  return log_sum_exp(terms);
}

HermiteLogPartition hermite_log_partition(const CompleteModelInstance& instance,
                                          int nodes) {
  validate_instance(instance, std::numeric_limits<int>::max(),
                    "hermite_log_partition");
  if (nodes < 1) {
    throw std::invalid_argument("hermite_log_partition: requires nodes >= 1");
  }

  const int n = instance.size();
  const double scale = std::sqrt(2.0 * instance.w / n);
  const GaussHermiteRule rule = gauss_hermite_rule(nodes);
  const double log_sqrt_pi = 0.5 * std::log(3.14159265358979323846);

  // Per node: signed log-magnitude of weight * prod_i (xi + x_i).
  std::vector<double> log_mag(nodes, -kInf);
  std::vector<int> sign(nodes, 1);
  for (int q = 0; q < nodes; ++q) {
    const double xi = scale * rule.nodes[q];
    double lm = std::log(rule.weights[q]) - log_sqrt_pi;
    int s = 1;
    bool zero = false;
    for (int i = 0; i < n; ++i) {
      const double factor = xi + instance.activities[i];
      if (factor == 0.0) {
        zero = true;
        break;
      }
      if (factor < 0.0) s = -s;
      lm += std::log(std::abs(factor));
    }
    if (!zero) {
      log_mag[q] = lm;
      sign[q] = s;
    }
  }

  double hi = -kInf;
  for (double v : log_mag) hi = std::max(hi, v);
  if (hi == -kInf) {
    throw PrecisionLossError("hermite_log_partition: all terms vanished");
  }

  std::vector<double> positive, negative;
  positive.reserve(nodes);
  negative.reserve(nodes);
  for (int q = 0; q < nodes; ++q) {
    if (log_mag[q] == -kInf) continue;
    (sign[q] > 0 ? positive : negative).push_back(std::exp(log_mag[q] - hi));
  }
  const double pos = pairwise_sum(positive);
  const double neg = pairwise_sum(negative);
  const double net = pos - neg;
  if (!(net > 0.0)) {
    throw PrecisionLossError(
        "hermite_log_partition: cancellation consumed the full mantissa");
  }

  HermiteLogPartition out;
  out.log_z = hi + std::log(net);
  out.cond_estimate = std::log(pos + neg) - std::log(net);
  out.precision_warning = out.cond_estimate > kHalfMantissaNats;
  return out;
}

GibbsObservables gibbs_observables(const CompleteModelInstance& instance,
                                   int max_vertices) {
  validate_instance(instance, max_vertices, "gibbs_observables");
  const auto terms = symmetric_log_terms(instance);

  double hi = -kInf;
  for (double t : terms) hi = std::max(hi, t);
  std::vector<double> weight(terms.size()), weighted_count(terms.size());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    weight[k] = std::exp(terms[k] - hi);
    weighted_count[k] = static_cast<double>(k) * weight[k];
  }
  const double denom = pairwise_sum(weight);
  const double numer = pairwise_sum(weighted_count);

  GibbsObservables out;
  out.log_z = hi + std::log(denom);
  out.mean_dimers = numer / denom;
  out.dimer_density = out.mean_dimers / instance.size();
  return out;
}

double phi_n(double xi, const CompleteModelInstance& instance) {
  validate_instance(instance, std::numeric_limits<int>::max(), "phi_n");
  const int n = instance.size();
  double sum = 0.0;
  for (double x : instance.activities) {
    const double factor = xi + x;
    if (factor == 0.0) return -kInf;
    sum += std::log(std::abs(factor));
  }
  return -xi * xi / (2.0 * instance.w) + sum / n;
}

double phi_envelope(double xi, double mean_x, double w) {
  if (!(xi > 0.0)) throw std::invalid_argument("phi_envelope: requires xi > 0");
  return -xi * xi / (2.0 * w) + std::log(xi) + (mean_x + 1.0) / xi;
}

AnnealedBound mean_partition_bound(int n, double w, double mean_x) {
  if (n < 1) throw std::invalid_argument("mean_partition_bound: requires n >= 1");
  if (!(w > 0.0 && mean_x > 0.0)) {
    throw std::invalid_argument("mean_partition_bound: requires w, mean_x > 0");
  }

  const double log_edge = std::log(w / n);
  const double log_mean = std::log(mean_x);
  const auto log_df = log_odd_double_factorial_table(n / 2);

  // E[Z_N] = sum over pair counts k of (w/N)^k (2k-1)!! C(N,2k) E[x]^(N-2k).
  std::vector<double> terms(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) {
    const double log_binom = std::lgamma(n + 1.0) - std::lgamma(2.0 * k + 1.0) -
                             std::lgamma(n - 2.0 * k + 1.0);
    terms[k] = k * log_edge + log_df[k] + log_binom + (n - 2 * k) * log_mean;
  }

  AnnealedBound out;
  out.exact_log_mean_z = log_sum_exp(terms);
  out.bound_log = n * log_mean + 0.5 * (n - 1) * w / (mean_x * mean_x);
  return out;
}

}  // namespace monodim::exact
