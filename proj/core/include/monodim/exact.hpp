#pragma once

#include <cstdint>
#include <vector>

namespace monodim::exact {

/// Finite graph with positive vertex activities and nonnegative symmetric
/// edge weights (absent edge = weight 0, no self-edges).
class WeightedGraph {
 public:
  explicit WeightedGraph(std::vector<double> activities);

  /// Complete graph on activities.size() vertices with every edge carrying
  /// total_coupling / N.
  static WeightedGraph complete(std::vector<double> activities,
                                double total_coupling);

  int size() const { return n_; }
  double activity(int i) const { return activities_[i]; }
  const std::vector<double>& activities() const { return activities_; }

  void set_edge(int i, int j, double weight);
  double edge(int i, int j) const;

 private:
  int n_;
  std::vector<double> activities_;
  std::vector<double> weights_;  // dense symmetric, diagonal zero
};

enum class PivotRule { lowest_index, highest_index };

/// Exact partition function via the vertex-deletion (Heilmann-Lieb)
/// recursion Z_G = x_i Z_{G-i} + sum_{j~i} w_ij Z_{G-i-j}, memoized on
/// vertex subsets. The recursion holds for every pivot vertex i, so the
/// pivot rule must not change the result.
double hl_partition(const WeightedGraph& graph,
                    PivotRule pivot = PivotRule::lowest_index,
                    int max_vertices = 24);

/// Log-domain variant of hl_partition (no overflow for large weights).
double hl_log_partition(const WeightedGraph& graph,
                        PivotRule pivot = PivotRule::lowest_index,
                        int max_vertices = 24);

/// Gaussian-moment oracle: expands E[prod_i (xi_i + x_i)] for a centred
/// Gaussian vector with covariance `covariance` as a sum over subsets and
/// their pairings (Wick-Isserlis). Equals the monomer-dimer partition
/// function whose dimer weights are the off-diagonal covariances; diagonal
/// entries never enter (pairings only pair distinct indices).
///
/// covariance is row-major n*n; only the upper off-diagonal is read.
double wick_partition(int n, const std::vector<double>& covariance,
                      const std::vector<double>& activities,
                      int max_vertices = 10);
double wick_partition(const WeightedGraph& graph, int max_vertices = 10);

/// Complete-graph instance with uniform per-edge weight w / N.
struct CompleteModelInstance {
  std::vector<double> activities;
  double w;

  int size() const { return static_cast<int>(activities.size()); }
};

/// Exact log Z via the closed form
///   Z = sum over even m of (w/N)^(m/2) (m-1)!! e_{N-m}(x),
/// with the elementary symmetric polynomials e_k carried in log domain.
double symmetric_log_partition(const CompleteModelInstance& instance,
                               int max_vertices = 20000);

struct HermiteLogPartition {
  double log_z;
  /// log(sum of |terms|) - log|sum of terms|; grows when node-level
  /// cancellation eats mantissa bits.
  double cond_estimate;
  bool precision_warning;
};

/// Evaluates Z = E[prod_i (xi + x_i)], xi ~ N(0, w/N), by a Gauss-Hermite
/// rule with `nodes` points scaled by sqrt(2w/N). Exact (up to rounding)
/// when nodes >= ceil((N+1)/2); products are accumulated as signed
/// log-magnitudes because xi + x_i can be negative at negative nodes.
HermiteLogPartition hermite_log_partition(const CompleteModelInstance& instance,
                                          int nodes);

/// Node count needed for polynomial exactness at size n.
inline int hermite_exact_nodes(int n) { return (n + 2) / 2; }

struct GibbsObservables {
  double log_z;
  double mean_dimers;     // Gibbs mean of the dimer count
  double dimer_density;   // mean_dimers / N
};

/// Exact Gibbs first moments from the symmetric closed form:
/// mean_dimers = sum_m (m/2) t_m / sum_m t_m over the even-m terms.
GibbsObservables gibbs_observables(const CompleteModelInstance& instance,
                                   int max_vertices = 20000);

/// Random pressure profile -xi^2/(2w) + (1/N) sum log|xi + x_i|, defined on
/// the whole real line; equals -inf exactly at xi = -x_i.
double phi_n(double xi, const CompleteModelInstance& instance);

/// Deterministic envelope -xi^2/(2w) + log xi + (mean_x + 1)/xi dominating
/// the sampled profile once the empirical mean of x is below mean_x + 1.
double phi_envelope(double xi, double mean_x, double w);

struct AnnealedBound {
  double exact_log_mean_z;  // log E[Z_N] for i.i.d. activities of mean mean_x
  double bound_log;         // N log E[x] + (N-1)/2 * w / E[x]^2
  double slack() const { return bound_log - exact_log_mean_z; }
};

/// Annealed average of Z_N and its closed-form upper bound, both in logs.
AnnealedBound mean_partition_bound(int n, double w, double mean_x);

}  // namespace monodim::exact
