#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "monodim/exact.hpp"
#include "monodim/experiments.hpp"

using namespace monodim;
using namespace monodim::experiments;

namespace {

StudyConfig small_uniform_study() {
  StudyConfig cfg{ActivityDistribution::uniform(0.5, 1.5),
                  1.0,
                  {64, 256},
                  40,
                  1,
                  1};
  return cfg;
}

}  // namespace

TEST_CASE("point-mass disorder is deterministic and converges") {
  StudyConfig cfg{ActivityDistribution::dirac(1.0), 1.0, {32, 128, 512}, 4, 9, 1};
  const auto study = run_pressure_study(cfg);
  REQUIRE(study.summary.size() == 3);
  double prev_gap = 1e9;
  for (const auto& s : study.summary) {
    CHECK(s.std_dev == 0.0);
    CHECK(s.min == s.max);
    const double gap = std::abs(s.mean - study.target_pressure);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(study.target_pressure ==
        doctest::Approx(0.29022881943455092).epsilon(1e-12));

  const auto decay = self_averaging_decay(study);
  for (const auto& row : decay) {
    CHECK(row.degenerate);
    CHECK(std::isnan(row.ratio));
    CHECK_FALSE(row.flagged);
  }
}

TEST_CASE("same seed twice gives bit-identical pressure matrices") {
  const auto a = run_pressure_study(small_uniform_study());
  const auto b = run_pressure_study(small_uniform_study());
  CHECK(a.pressures == b.pressures);
}

TEST_CASE("thread count does not change the matrix") {
  auto cfg = small_uniform_study();
  cfg.threads = 1;
  const auto serial = run_pressure_study(cfg);
  cfg.threads = 4;
  const auto parallel = run_pressure_study(cfg);
  CHECK(serial.pressures == parallel.pressures);
}

TEST_CASE("per-replica seeds are reproducible lookup values") {
  const auto study = run_pressure_study(small_uniform_study());
  CHECK(replica_seed(study.base_seed, 64, 0) ==
        replica_seed(study.base_seed, 64, 0));
  CHECK(replica_seed(study.base_seed, 64, 0) !=
        replica_seed(study.base_seed, 64, 1));
}

TEST_CASE("standard deviation decays roughly like 1/sqrt(N)") {
  StudyConfig cfg{ActivityDistribution::uniform(0.5, 1.5),
                  1.0,
                  {256, 1024},
                  100,
                  3,
                  1};
  const auto study = run_pressure_study(cfg);
  const auto decay = self_averaging_decay(study);
  REQUIRE(decay.size() == 1);
  CHECK_FALSE(decay[0].degenerate);
  // 4x size step: ratio near 0.5, flag threshold at 0.75.
  CHECK(decay[0].ratio > 0.25);
  CHECK(decay[0].ratio < 0.75);
  CHECK_FALSE(decay[0].flagged);
}

TEST_CASE("quenched mean sits below the annealed bound (Jensen slack)") {
  const auto study = run_pressure_study(small_uniform_study());
  const auto dist = ActivityDistribution::uniform(0.5, 1.5);
  for (std::size_t ni = 0; ni < study.n_values.size(); ++ni) {
    const int n = study.n_values[ni];
    const auto annealed = exact::mean_partition_bound(n, 1.0, dist.mean());
    const auto& s = study.summary[ni];
    const double allowance =
        3.0 * s.std_dev / std::sqrt(static_cast<double>(study.replicas));
    CHECK(s.mean <= annealed.exact_log_mean_z / n + allowance);
  }
}

TEST_CASE("replica validation") {
  auto cfg = small_uniform_study();
  cfg.replicas = 1;
  CHECK_THROWS_AS(run_pressure_study(cfg), std::invalid_argument);
  cfg = small_uniform_study();
  cfg.n_values = {};
  CHECK_THROWS_AS(run_pressure_study(cfg), std::invalid_argument);
}

TEST_CASE("concentration bound arithmetic") {
  // Oracle: direct evaluation of
  //   2 exp(-t^2 N / (4 q^2 log^2 N)) + (a + bN) N^(1-q).
  auto oracle = [](double t, int n, double q, double c1, double c2, double c3) {
    const double a = 4.0 + 2.0 * c2 * c3;
    const double b = 2.0 * c1 * c3 * c3;
    const double ln = std::log(static_cast<double>(n));
    return 2.0 * std::exp(-t * t * n / (4.0 * q * q * ln * ln)) +
           (a + b * n) * std::pow(static_cast<double>(n), 1.0 - q);
  };

  CHECK(azuma_bound({0.1, 100, 4.0, 1.0, 1.0, 1.0}) ==
        doctest::Approx(oracle(0.1, 100, 4.0, 1.0, 1.0, 1.0)).epsilon(1e-14));
  CHECK(azuma_bound({0.1, 100, 4.0, 1.0, 1.0, 1.0}) ==
        doctest::Approx(1.9987330138056527).epsilon(1e-12));

  // All constants zero: only the additive 4 survives in the polynomial term.
  CHECK(azuma_bound({0.2, 50, 2.0, 0.0, 0.0, 0.0}) ==
        doctest::Approx(oracle(0.2, 50, 2.0, 0.0, 0.0, 0.0)).epsilon(1e-14));
  CHECK(azuma_bound({0.2, 50, 2.0, 0.0, 0.0, 0.0}) ==
        doctest::Approx(2.0 * std::exp(-0.2 * 0.2 * 50.0 /
                                       (16.0 * std::pow(std::log(50.0), 2))) +
                        4.0 / 50.0)
            .epsilon(1e-14));

  CHECK(azuma_bound({1.0, 1000, 3.0, 0.5, 2.0, 1.5}) ==
        doctest::Approx(1.1196686656909955).epsilon(1e-12));
}

TEST_CASE("concentration bound limits and monotonicity") {
  // Large q: exponential term tends to 2, polynomial term to 0. The
  // polynomial term is checked directly (it underflows past the exponential
  // term's rounding once q is large).
  double prev_poly = 1e300;
  for (double q : {2.0, 4.0, 8.0, 16.0, 64.0}) {
    const double poly = (4.0 + 2.0 + 2.0 * 100.0) *
                        std::pow(100.0, 1.0 - q);
    CHECK(poly < prev_poly);
    CHECK(azuma_bound({0.1, 100, q, 1.0, 1.0, 1.0}) >=
          2.0 * std::exp(-0.1 * 0.1 * 100.0 /
                         (4.0 * q * q * std::pow(std::log(100.0), 2))));
    prev_poly = poly;
  }
  CHECK(azuma_bound({0.1, 100, 512.0, 1.0, 1.0, 1.0}) ==
        doctest::Approx(2.0).epsilon(1e-4));

  // Monotone decreasing in t.
  double prev = 1e300;
  for (double t : {0.01, 0.1, 0.5, 1.0, 2.0}) {
    const double value = azuma_bound({t, 100, 4.0, 1.0, 1.0, 1.0});
    CHECK(value < prev);
    prev = value;
  }

  // Decreasing in N at q > 3 beyond the crossover, checked on a grid.
  prev = 1e300;
  for (int n : {100, 1000, 10000, 100000}) {
    const double value = azuma_bound({0.5, n, 4.0, 1.0, 1.0, 1.0});
    CHECK(value < prev);
    prev = value;
  }

  CHECK_THROWS_AS(azuma_bound({0.0, 100, 4.0, 1.0, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(azuma_bound({0.1, 1, 4.0, 1.0, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(azuma_bound({0.1, 100, 0.5, 1.0, 1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("profile deviation study: point mass has zero deviation") {
  LlnConfig cfg{ActivityDistribution::dirac(1.0), 1.0, 2.0, {16, 64}, 3, 5,
                128, 1};
  const auto result = uniform_lln_study(cfg);
  for (const auto& s : result.per_n) {
    CHECK(s.median_dev < 1e-12);
    CHECK(s.max_dev < 1e-12);
    CHECK(s.reflection_violations == 0);
    CHECK(s.envelope_violations == 0);
  }
}

TEST_CASE("profile deviation study: decay and side checks") {
  LlnConfig cfg{ActivityDistribution::uniform(0.5, 1.5), 1.0, 2.0, {64, 256},
                60, 11, 256, 1};
  const auto result = uniform_lln_study(cfg);
  REQUIRE(result.per_n.size() == 2);
  CHECK(result.per_n[1].median_dev < result.per_n[0].median_dev);
  for (const auto& s : result.per_n) {
    CHECK(s.reflection_violations == 0);
    CHECK(s.envelope_violations == 0);
    CHECK(s.envelope_checked > 0);
  }
  // Deviations are per-replica sups, so they are positive for genuine
  // disorder.
  for (const auto& row : result.deviations) {
    for (double dev : row) CHECK(dev > 0.0);
  }
}

TEST_CASE("profile study rejects a window that misses the maximizer") {
  LlnConfig cfg{ActivityDistribution::dirac(1.0), 1.0, 0.1, {16}, 2, 5, 64, 1};
  CHECK_THROWS_AS(uniform_lln_study(cfg), std::invalid_argument);
}

TEST_CASE("annealed inequality rows") {
  const auto dist = ActivityDistribution::uniform(0.5, 1.5);
  const std::vector<int> sizes = {1, 2, 10, 100, 1000};
  const auto rows = mean_z_inequality_check(dist, 1.0, sizes);
  REQUIRE(rows.size() == sizes.size());
  CHECK(rows[0].slack == doctest::Approx(0.0).epsilon(1e-14));
  // E[x] = 1 here, so the N=2 slack is 1/2 - log(3/2).
  CHECK(rows[1].slack ==
        doctest::Approx(0.094534891891835615).epsilon(1e-12));
  double prev_slack = -1.0;
  for (const auto& row : rows) {
    CHECK(row.slack >= -1e-12);
    CHECK(row.slack >= prev_slack - 1e-12);
    prev_slack = row.slack;
  }
}

TEST_CASE("finite-size Gibbs density approaches the limit density") {
  const auto dist = ActivityDistribution::uniform(0.5, 1.5);
  variational::ModelParams params{1.0};
  const double limit_d =
      variational::solve_fixed_point(params, dist).dimer_density;

  RandomStream root(21);
  const int replicas = 100;
  double acc = 0.0;
  for (int r = 0; r < replicas; ++r) {
    RandomStream stream = root.derive(1024).derive(static_cast<std::uint64_t>(r));
    exact::CompleteModelInstance instance{dist.sample(1024, stream), 1.0};
    acc += exact::gibbs_observables(instance).dimer_density;
  }
  CHECK(std::abs(acc / replicas - limit_d) < 0.01);
}
