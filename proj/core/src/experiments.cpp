#include "monodim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "monodim/exact.hpp"
#include "monodim/parallel.hpp"
#include "monodim/special_functions.hpp"

namespace monodim::experiments {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

SizeSummary summarize(int n, const std::vector<double>& values) {
  SizeSummary s;
  s.n = n;
  s.mean = pairwise_sum(values) / values.size();
  double sq = 0.0;
  s.min = values.front();
  s.max = values.front();
  for (double v : values) {
    sq += (v - s.mean) * (v - s.mean);
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.std_dev = values.size() > 1
                  ? std::sqrt(sq / (static_cast<double>(values.size()) - 1.0))
                  : 0.0;
  return s;
}

double sorted_quantile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  const double pos = p * (static_cast<double>(values.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace

std::uint64_t replica_seed(std::uint64_t base_seed, int n, int replica) {
  return RandomStream(base_seed)
      .derive(static_cast<std::uint64_t>(n))
      .derive(static_cast<std::uint64_t>(replica))
      .seed();
}

ReplicaStudy run_pressure_study(const StudyConfig& config) {
  if (config.replicas < 2) {
    throw std::invalid_argument("run_pressure_study: requires replicas >= 2");
  }
  if (config.n_values.empty()) {
    throw std::invalid_argument("run_pressure_study: empty n_values");
  }
  for (int n : config.n_values) {
    if (n < 1) throw std::invalid_argument("run_pressure_study: n must be >= 1");
  }

  ReplicaStudy study;
  study.n_values = config.n_values;
  study.replicas = config.replicas;
  study.base_seed = config.base_seed;
  study.pressures.assign(config.n_values.size(),
                         std::vector<double>(config.replicas, kNan));

  variational::ModelParams params{config.w, config.fp_tol, config.max_iter};
  study.target_pressure =
      variational::solve_fixed_point(params, config.dist).pressure;

  const std::size_t tasks =
      config.n_values.size() * static_cast<std::size_t>(config.replicas);
  parallel_for(tasks, config.threads, [&](std::size_t task) {
    const std::size_t ni = task / config.replicas;
    const int r = static_cast<int>(task % config.replicas);
    const int n = config.n_values[ni];
    RandomStream stream =
        RandomStream(config.base_seed)
            .derive(static_cast<std::uint64_t>(n))
            .derive(static_cast<std::uint64_t>(r));
    try {
      exact::CompleteModelInstance instance{
          config.dist.sample(static_cast<std::size_t>(n), stream), config.w};
      const double p = exact::symmetric_log_partition(instance) / n;
      if (!std::isfinite(p)) {
        throw std::runtime_error("non-finite pressure");
      }
      study.pressures[ni][r] = p;
    } catch (const std::exception& err) {
      throw std::runtime_error("run_pressure_study: at N = " +
                               std::to_string(n) + ", replica " +
                               std::to_string(r) + ": " + err.what());
    }
  });

  study.summary.reserve(config.n_values.size());
  for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
    study.summary.push_back(
        summarize(config.n_values[ni], study.pressures[ni]));
  }
  return study;
}

std::vector<DecayRow> self_averaging_decay(const ReplicaStudy& study) {
  if (study.summary.size() < 2) {
    throw std::invalid_argument(
        "self_averaging_decay: needs at least two sizes");
  }
  std::vector<DecayRow> rows;
  rows.reserve(study.summary.size() - 1);
  for (std::size_t i = 1; i < study.summary.size(); ++i) {
    const auto& prev = study.summary[i - 1];
    const auto& cur = study.summary[i];
    DecayRow row;
    row.n_prev = prev.n;
    row.n = cur.n;
    row.std_prev = prev.std_dev;
    row.std_dev = cur.std_dev;
    row.degenerate = prev.std_dev == 0.0;
    row.ratio = row.degenerate ? kNan : cur.std_dev / prev.std_dev;
    row.flagged =
        !row.degenerate && cur.n == 4 * prev.n && row.ratio > 0.75;
    rows.push_back(row);
  }
  return rows;
}

double azuma_bound(const ConcentrationBoundInputs& inputs) {
  if (!(inputs.t > 0.0)) throw std::invalid_argument("azuma_bound: t must be > 0");
  if (inputs.n < 2) throw std::invalid_argument("azuma_bound: n must be >= 2");
  if (!(inputs.q >= 1.0)) throw std::invalid_argument("azuma_bound: q must be >= 1");
  if (inputs.c1 < 0.0 || inputs.c2 < 0.0 || inputs.c3 < 0.0) {
    throw std::invalid_argument("azuma_bound: constants must be >= 0");
  }

  const double n = static_cast<double>(inputs.n);
  const double log_n = std::log(n);
  const double exp_term = 2.0 * std::exp(-inputs.t * inputs.t * n /
                                         (4.0 * inputs.q * inputs.q * log_n *
                                          log_n));
  const double a = 4.0 + 2.0 * inputs.c2 * inputs.c3;
  const double b = 2.0 * inputs.c1 * inputs.c3 * inputs.c3;
  const double poly_term = (a + b * n) * std::exp((1.0 - inputs.q) * log_n);
  return exp_term + poly_term;
}

LlnResult uniform_lln_study(const LlnConfig& config) {
  if (config.replicas < 1) {
    throw std::invalid_argument("uniform_lln_study: requires replicas >= 1");
  }
  if (config.grid_points < 2) {
    throw std::invalid_argument("uniform_lln_study: needs at least 2 grid points");
  }
  if (config.n_values.empty()) {
    throw std::invalid_argument("uniform_lln_study: empty n_values");
  }
  for (int n : config.n_values) {
    if (n < 1) throw std::invalid_argument("uniform_lln_study: n must be >= 1");
  }

  variational::ModelParams params{config.w};
  const auto solution = variational::solve_fixed_point(params, config.dist);
  if (!(config.big_m > solution.xi_star)) {
    throw std::invalid_argument(
        "uniform_lln_study: window M must exceed the maximizer");
  }

  const int grid = config.grid_points;
  std::vector<double> xi(grid), phi_limit(grid);
  for (int j = 0; j < grid; ++j) {
    xi[j] = config.big_m * j / (grid - 1);
    phi_limit[j] = variational::phi(xi[j], params, config.dist);
  }
  const double mean_x = config.dist.mean();

  struct ReplicaStats {
    double dev = 0.0;
    int reflection_violations = 0;
    int envelope_violations = 0;
    bool envelope_applicable = false;
  };
  std::vector<std::vector<ReplicaStats>> stats(
      config.n_values.size(), std::vector<ReplicaStats>(config.replicas));

  const std::size_t tasks =
      config.n_values.size() * static_cast<std::size_t>(config.replicas);
  parallel_for(tasks, config.threads, [&](std::size_t task) {
    const std::size_t ni = task / config.replicas;
    const int r = static_cast<int>(task % config.replicas);
    const int n = config.n_values[ni];
    RandomStream stream =
        RandomStream(config.base_seed)
            .derive(static_cast<std::uint64_t>(n))
            .derive(static_cast<std::uint64_t>(r));
    exact::CompleteModelInstance instance{
        config.dist.sample(static_cast<std::size_t>(n), stream), config.w};
    const double sample_mean =
        pairwise_sum(instance.activities) / instance.size();

    ReplicaStats& rs = stats[ni][r];
    rs.envelope_applicable = sample_mean < mean_x + 1.0;
    for (int j = 0; j < grid; ++j) {
      const double sampled = exact::phi_n(xi[j], instance);
      rs.dev = std::max(rs.dev, std::abs(sampled - phi_limit[j]));
      if (xi[j] > 0.0) {
        if (!(exact::phi_n(-xi[j], instance) < sampled)) {
          ++rs.reflection_violations;
        }
        if (rs.envelope_applicable &&
            !(sampled < exact::phi_envelope(xi[j], mean_x, config.w))) {
          ++rs.envelope_violations;
        }
      }
    }
  });

  LlnResult result;
  result.deviations.assign(config.n_values.size(),
                           std::vector<double>(config.replicas));
  result.per_n.reserve(config.n_values.size());
  for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
    LlnSummary summary;
    summary.n = config.n_values[ni];
    summary.reflection_violations = 0;
    summary.envelope_violations = 0;
    summary.envelope_checked = 0;
    double max_dev = 0.0;
    for (int r = 0; r < config.replicas; ++r) {
      const auto& rs = stats[ni][r];
      result.deviations[ni][r] = rs.dev;
      max_dev = std::max(max_dev, rs.dev);
      summary.reflection_violations += rs.reflection_violations;
      summary.envelope_violations += rs.envelope_violations;
      if (rs.envelope_applicable) ++summary.envelope_checked;
    }
    summary.median_dev = sorted_quantile(result.deviations[ni], 0.5);
    summary.q25_dev = sorted_quantile(result.deviations[ni], 0.25);
    summary.q75_dev = sorted_quantile(result.deviations[ni], 0.75);
    summary.max_dev = max_dev;
    result.per_n.push_back(summary);
  }
  return result;
}

std::vector<AnnealedCheckRow> mean_z_inequality_check(
    const ActivityDistribution& dist, double w, std::span<const int> n_values) {
  if (n_values.empty()) {
    throw std::invalid_argument("mean_z_inequality_check: empty n_values");
  }
  const double mean_x = dist.mean();
  std::vector<AnnealedCheckRow> rows;
  rows.reserve(n_values.size());
  for (int n : n_values) {
    const auto bound = exact::mean_partition_bound(n, w, mean_x);
    if (bound.slack() < -1e-9) {
      throw std::runtime_error(
          "mean_z_inequality_check: negative slack at N = " +
          std::to_string(n));
    }
    rows.push_back(AnnealedCheckRow{n, bound.exact_log_mean_z, bound.bound_log,
                                    bound.slack()});
  }
  return rows;
}

}  // namespace monodim::experiments
