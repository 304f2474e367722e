#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "monodim/distribution.hpp"
#include "monodim/variational.hpp"

namespace monodim::experiments {

struct StudyConfig {
  ActivityDistribution dist;
  double w;
  std::vector<int> n_values;
  int replicas;
  std::uint64_t base_seed;
  int threads = 1;
  double fp_tol = 1e-12;
  int max_iter = 200;
};

struct SizeSummary {
  int n;
  double mean;
  double std_dev;  // sample standard deviation over replicas
  double min;
  double max;
};

/// Per-replica pressures p_N = (1/N) log Z_N across disorder samples.
///
/// Replica (n_index, r) draws its activities from the stream derived as
/// root(base_seed).derive(N).derive(r), so the matrix is reproducible and
/// independent of evaluation order and thread count.
struct ReplicaStudy {
  std::vector<int> n_values;
  int replicas = 0;
  std::uint64_t base_seed = 0;
  std::vector<std::vector<double>> pressures;  // [n_index][replica]
  std::vector<SizeSummary> summary;
  double target_pressure = 0.0;  // variational limit for (dist, w)
};

ReplicaStudy run_pressure_study(const StudyConfig& config);

/// Per-replica seed for CSV provenance (matches what run_pressure_study
/// used for (base_seed, N, replica)).
std::uint64_t replica_seed(std::uint64_t base_seed, int n, int replica);

struct DecayRow {
  int n_prev;
  int n;
  double std_prev;
  double std_dev;
  double ratio;     // std(n) / std(n_prev); NaN when degenerate
  bool degenerate;  // deterministic disorder, both stds ~ 0
  bool flagged;     // 4x size step whose std ratio exceeded 0.75
};

/// Consecutive standard-deviation ratios of a study; under 1/sqrt(N)
/// scaling a 4x size step should land near 0.5.
std::vector<DecayRow> self_averaging_decay(const ReplicaStudy& study);

struct ConcentrationBoundInputs {
  double t;   // deviation threshold, > 0
  int n;      // system size, >= 2
  double q;   // martingale exponent, >= 1
  double c1;  // sup E[w_ij]
  double c2;  // sup E[x_i]
  double c3;  // sup E[1/x_i]
};

/// Concentration tail bound
///   2 exp(-t^2 N / (4 q^2 log^2 N)) + (a + b N) N^(1-q),
/// a = 4 + 2 c2 c3, b = 2 c1 c3^2. May exceed 1 at small N (vacuous there).
double azuma_bound(const ConcentrationBoundInputs& inputs);

struct LlnConfig {
  ActivityDistribution dist;
  double w;
  double big_m;  // window [0, M]; must exceed the maximizer
  std::vector<int> n_values;
  int replicas;
  std::uint64_t base_seed;
  int grid_points = 512;
  int threads = 1;
};

struct LlnSummary {
  int n;
  double median_dev;  // median over replicas of sup |Phi_N - Phi| on [0, M]
  double q25_dev;
  double q75_dev;
  double max_dev;
  int reflection_violations;  // Phi_N(-xi) < Phi_N(xi) failures on (0, M]
  int envelope_violations;    // Phi_N(xi) < envelope failures when applicable
  int envelope_checked;       // replicas with sample mean below E[x] + 1
};

struct LlnResult {
  std::vector<LlnSummary> per_n;
  std::vector<std::vector<double>> deviations;  // [n_index][replica]
};

/// Sup-deviation study of the sampled pressure profile against the limit
/// functional on a uniform grid, with the reflection and envelope
/// side-checks.
LlnResult uniform_lln_study(const LlnConfig& config);

struct AnnealedCheckRow {
  int n;
  double exact_log_mean_z;
  double bound_log;
  double slack;  // bound - exact, nonnegative
};

/// Annealed average of Z_N against its closed-form bound, per size.
std::vector<AnnealedCheckRow> mean_z_inequality_check(
    const ActivityDistribution& dist, double w, std::span<const int> n_values);

}  // namespace monodim::experiments
