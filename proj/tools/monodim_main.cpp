// monodim: mean-field monomer-dimer model with random monomer activities.
//
// Subcommands: solve, curve, exact, oracle-check, study, lln, bounds.
// Config may come from flags or a key = value file (--config); flags win.
// Exit codes: 0 success, 1 numeric failure, 2 usage/config error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "monodim/distribution.hpp"
#include "monodim/errors.hpp"
#include "monodim/exact.hpp"
#include "monodim/experiments.hpp"
#include "monodim/parallel.hpp"
#include "monodim/quadrature.hpp"
#include "monodim/report.hpp"
#include "monodim/run_config.hpp"
#include "monodim/variational.hpp"

namespace {

using monodim::ActivityDistribution;
using monodim::RandomStream;
using monodim::config::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;

struct CliValues {
  std::string config_file;
  std::string dist_spec;
  double w = 0.0;
  std::string w_grid;
  int n = 0;
  std::string n_values;
  int replicas = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::string out_path;
  std::string format;
  int threads = -1;
  double big_m = 0.0;
  int grid_points = 0;
  int nodes = 0;
  int instances = 0;
  std::string engine;
  std::string activities_file;
  double t = 0.0, q = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
};

void add_common_options(CLI::App* cmd, CliValues& v) {
  cmd->add_option("--config", v.config_file, "key = value config file");
  cmd->add_option("--dist", v.dist_spec,
                  "activity law, e.g. dirac:1 or uniform:0.5,1.5");
  cmd->add_option("--w", v.w, "dimer coupling w > 0");
  cmd->add_option("--w-grid", v.w_grid, "comma-separated increasing w values");
  cmd->add_option("--n", v.n, "system size");
  cmd->add_option("--n-values", v.n_values, "comma-separated system sizes");
  cmd->add_option("--replicas", v.replicas, "disorder replicas");
  cmd->add_option("--seed", v.seed, "base seed (required for stochastic runs)");
  cmd->add_option("--tol", v.tol, "fixed-point residual tolerance");
  cmd->add_option("--out", v.out_path, "output file path");
  cmd->add_option("--format", v.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", v.threads,
                  "worker threads (0 = hardware, env MONODIM_THREADS)");
  cmd->add_option("--m", v.big_m, "profile window [0, M]");
  cmd->add_option("--grid-points", v.grid_points, "profile grid points");
  cmd->add_option("--nodes", v.nodes, "Gauss-Hermite nodes");
  cmd->add_option("--instances", v.instances, "oracle-check instances");
  cmd->add_option("--engine", v.engine, "hl|wick|symmetric|hermite|all")
      ->check(CLI::IsMember({"hl", "wick", "symmetric", "hermite", "all"}));
  cmd->add_option("--activities", v.activities_file,
                  "CSV file, one activity per line");
  cmd->add_option("--t", v.t, "concentration threshold t");
  cmd->add_option("--q", v.q, "martingale exponent q");
  cmd->add_option("--c1", v.c1, "sup E[w_ij]");
  cmd->add_option("--c2", v.c2, "sup E[x]");
  cmd->add_option("--c3", v.c3, "sup E[1/x]");
}

// Config file first, then every flag the user actually passed on top.
RunConfig merge_config(const CLI::App* cmd, const CliValues& v,
                       const std::string& command) {
  RunConfig cfg;
  if (cmd->count("--config") > 0) {
    monodim::config::apply_config_file(cfg, v.config_file);
  }
  cfg.command = command;
  if (cmd->count("--dist")) cfg.dist_spec = v.dist_spec;
  if (cmd->count("--w")) cfg.w = v.w;
  if (cmd->count("--w-grid")) cfg.w_grid = monodim::config::parse_double_list(v.w_grid);
  if (cmd->count("--n")) cfg.n = v.n;
  if (cmd->count("--n-values")) cfg.n_values = monodim::config::parse_int_list(v.n_values);
  if (cmd->count("--replicas")) cfg.replicas = v.replicas;
  if (cmd->count("--seed")) cfg.seed = v.seed;
  if (cmd->count("--tol")) cfg.tol = v.tol;
  if (cmd->count("--out")) cfg.out_path = v.out_path;
  if (cmd->count("--format")) cfg.format = v.format;
  if (cmd->count("--threads")) {
    cfg.threads = v.threads;
  } else if (cfg.threads == 0) {
    if (const char* env = std::getenv("MONODIM_THREADS")) {
      cfg.threads = std::atoi(env);
    }
  }
  if (cmd->count("--m")) cfg.big_m = v.big_m;
  if (cmd->count("--grid-points")) cfg.grid_points = v.grid_points;
  if (cmd->count("--nodes")) cfg.nodes = v.nodes;
  if (cmd->count("--instances")) cfg.instances = v.instances;
  if (cmd->count("--engine")) cfg.engine = v.engine;
  if (cmd->count("--activities")) cfg.activities_file = v.activities_file;
  if (cmd->count("--t")) cfg.t = v.t;
  if (cmd->count("--q")) cfg.q = v.q;
  if (cmd->count("--c1")) cfg.c1 = v.c1;
  if (cmd->count("--c2")) cfg.c2 = v.c2;
  if (cmd->count("--c3")) cfg.c3 = v.c3;
  return cfg;
}

ActivityDistribution require_dist(const RunConfig& cfg) {
  if (cfg.dist_spec.empty()) {
    throw std::invalid_argument("missing --dist (or dist in the config file)");
  }
  auto dist = monodim::config::parse_dist_spec(cfg.dist_spec);
  if (cfg.tol) {
    // Expectation noise must sit below the solver tolerance.
    dist.set_quadrature_tol(std::min(dist.quadrature_tol(), *cfg.tol * 0.01));
  }
  return dist;
}

double require_w(const RunConfig& cfg) {
  if (!cfg.w) throw std::invalid_argument("missing --w");
  if (!(*cfg.w > 0.0)) throw std::invalid_argument("--w must be > 0");
  return *cfg.w;
}

std::uint64_t require_seed(const RunConfig& cfg) {
  if (!cfg.seed) {
    throw std::invalid_argument(
        "stochastic commands require an explicit --seed");
  }
  return *cfg.seed;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

// Record goes to --out when given, else to stdout (digest then moves to
// stderr so stdout stays machine-readable).
void emit_record(const RunConfig& cfg, const std::string& record,
                 const std::string& digest) {
  if (!cfg.out_path.empty()) {
    write_file(cfg.out_path, record);
    std::cout << digest;
  } else {
    std::cerr << digest;
    std::cout << record;
  }
}

std::string sibling_json_path(const std::string& csv_path) {
  const std::size_t dot = csv_path.find_last_of('.');
  if (dot == std::string::npos) return csv_path + ".json";
  return csv_path.substr(0, dot) + ".json";
}

monodim::variational::ModelParams make_params(const RunConfig& cfg, double w) {
  monodim::variational::ModelParams params{w};
  if (cfg.tol) params.fp_tol = *cfg.tol;
  return params;
}

int cmd_solve(const RunConfig& cfg) {
  const auto dist = require_dist(cfg);
  const double w = require_w(cfg);
  const auto params = make_params(cfg, w);
  const auto solution = monodim::variational::solve_fixed_point(params, dist);

  char digest[512];
  std::snprintf(digest, sizeof(digest),
                "solve %s w=%g: xi*=%.12g pressure=%.12g dimer=%.12g "
                "monomer=%.12g residual=%.3g iters=%d%s\n",
                dist.name().c_str(), w, solution.xi_star, solution.pressure,
                solution.dimer_density, solution.monomer_density,
                solution.residual, solution.iterations,
                solution.endpoint_warning ? " [warn: bracket endpoint]" : "");

  std::string record;
  if (cfg.format == "json") {
    record = monodim::report::solution_json(dist.name(), w, solution) + "\n";
  } else {
    record = std::string(monodim::report::kSolutionCsvHeader) + "\n" +
             monodim::report::solution_csv_row(w, solution) + "\n";
  }
  emit_record(cfg, record, digest);
  return kExitOk;
}

int cmd_curve(const RunConfig& cfg) {
  const auto dist = require_dist(cfg);
  if (cfg.w_grid.empty()) throw std::invalid_argument("missing --w-grid");
  double fp_tol = cfg.tol ? *cfg.tol : 1e-12;
  const auto points = monodim::variational::pressure_curve(
      dist, cfg.w_grid, fp_tol, 200, cfg.threads);

  std::string digest = "curve " + dist.name() + ":\n";
  for (const auto& point : points) {
    char line[256];
    std::snprintf(line, sizeof(line),
                  "  w=%-10g xi*=%.10g p=%.10g d=%.10g\n", point.w,
                  point.solution.xi_star, point.solution.pressure,
                  point.solution.dimer_density);
    digest += line;
  }
  const std::string record =
      cfg.format == "json" ? monodim::report::curve_json(dist.name(), points) + "\n"
                           : monodim::report::curve_csv(points);
  emit_record(cfg, record, digest);
  return kExitOk;
}

int cmd_exact(const RunConfig& cfg) {
  const double w = require_w(cfg);
  std::vector<double> activities;
  if (!cfg.activities_file.empty()) {
    activities = monodim::config::read_activities_file(cfg.activities_file);
  } else {
    const auto dist = require_dist(cfg);
    if (!cfg.n) throw std::invalid_argument("missing --n (or --activities)");
    RandomStream stream(require_seed(cfg));
    activities = dist.sample(static_cast<std::size_t>(*cfg.n), stream);
  }
  const int n = static_cast<int>(activities.size());
  const monodim::exact::CompleteModelInstance instance{activities, w};

  const bool all = cfg.engine == "all";
  std::vector<monodim::report::EngineRecord> records;
  std::string digest;

  if (all || cfg.engine == "symmetric") {
    const auto obs = monodim::exact::gibbs_observables(instance);
    records.push_back({"symmetric", n, w, obs.log_z, obs.mean_dimers,
                       std::nullopt});
  }
  if (all || cfg.engine == "hl") {
    if (n <= 24) {
      const auto graph = monodim::exact::WeightedGraph::complete(activities, w);
      records.push_back({"hl", n, w, monodim::exact::hl_log_partition(graph),
                         std::nullopt, std::nullopt});
    } else if (!all) {
      throw monodim::SizeBudgetError("hl engine limited to n <= 24");
    } else {
      digest += "note: hl leg skipped (n > 24)\n";
    }
  }
  if (all || cfg.engine == "wick") {
    if (n <= 10) {
      const auto graph = monodim::exact::WeightedGraph::complete(activities, w);
      records.push_back({"wick", n, w,
                         std::log(monodim::exact::wick_partition(graph)),
                         std::nullopt, std::nullopt});
    } else if (!all) {
      throw monodim::SizeBudgetError("wick engine limited to n <= 10");
    } else {
      digest += "note: wick leg skipped (n > 10)\n";
    }
  }
  if (all || cfg.engine == "hermite") {
    const int nodes =
        cfg.nodes ? *cfg.nodes : monodim::exact::hermite_exact_nodes(n);
    if (nodes <= monodim::kMaxGaussHermiteOrder) {
      const auto h = monodim::exact::hermite_log_partition(instance, nodes);
      records.push_back({"hermite", n, w, h.log_z, std::nullopt,
                         h.cond_estimate});
      if (h.precision_warning) {
        digest += "warning: hermite cancellation above half mantissa\n";
      }
    } else if (!all) {
      throw monodim::SizeBudgetError(
          "hermite engine limited to " +
          std::to_string(monodim::kMaxGaussHermiteOrder) + " nodes");
    } else {
      digest += "note: hermite leg skipped (nodes > " +
                std::to_string(monodim::kMaxGaussHermiteOrder) + ")\n";
    }
  }

  for (const auto& r : records) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-9s n=%d log_z=%.12g\n",
                  r.engine.c_str(), r.n, r.log_z);
    digest += line;
  }
  const std::string record = cfg.format == "json"
                                 ? monodim::report::engine_records_json(records) + "\n"
                                 : monodim::report::engine_records_csv(records);
  emit_record(cfg, record, digest);
  return kExitOk;
}

int cmd_oracle_check(const RunConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  const int instances = cfg.instances ? *cfg.instances : 50;
  if (instances < 1) throw std::invalid_argument("--instances must be >= 1");
  RandomStream root(seed);

  double max_rel = 0.0;
  bool wick_skipped = false;
  for (int i = 0; i < instances; ++i) {
    RandomStream stream = root.derive(static_cast<std::uint64_t>(i));
    const int n = cfg.n ? *cfg.n : 2 + (i % 9);
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (auto& x : xs) x = 0.1 + 2.9 * stream.next_unit();

    auto track = [&max_rel](double got, double reference) {
      const double rel = std::abs(got - reference) /
                         std::max(1e-300, std::abs(reference));
      max_rel = std::max(max_rel, rel);
    };

    // General symmetric nonnegative couplings: pairing oracle vs recursion.
    if (n <= 24) {
      monodim::exact::WeightedGraph graph(xs);
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          graph.set_edge(a, b, 2.0 * stream.next_unit());
        }
      }
      const double hl = monodim::exact::hl_partition(graph);
      if (n <= 10) {
        track(monodim::exact::wick_partition(graph), hl);
      } else {
        wick_skipped = true;
      }
      track(monodim::exact::hl_partition(
                graph, monodim::exact::PivotRule::highest_index),
            hl);
    }

    // Uniform coupling w/N: all engines against the symmetric closed form.
    const double w = 0.5 + 3.5 * stream.next_unit();
    const monodim::exact::CompleteModelInstance instance{xs, w};
    const double log_sym = monodim::exact::symmetric_log_partition(instance);
    if (n <= 24) {
      const auto complete = monodim::exact::WeightedGraph::complete(xs, w);
      track(monodim::exact::hl_log_partition(complete), log_sym);
      if (n <= 10) {
        track(std::log(monodim::exact::wick_partition(complete)), log_sym);
      }
    }
    const auto h = monodim::exact::hermite_log_partition(
        instance, monodim::exact::hermite_exact_nodes(n));
    track(h.log_z, log_sym);
  }

  char digest[256];
  std::snprintf(digest, sizeof(digest),
                "oracle-check: %d instances, max relative discrepancy %.3g%s\n",
                instances, max_rel,
                wick_skipped ? " (wick leg skipped where n > 10)" : "");
  std::cout << digest;
  if (!(max_rel < 1e-9)) {
    std::cerr << "oracle-check: discrepancy above 1e-9\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int cmd_study(const RunConfig& cfg) {
  const auto dist = require_dist(cfg);
  const double w = require_w(cfg);
  const std::uint64_t seed = require_seed(cfg);
  const std::vector<int> n_values =
      cfg.n_values.empty() ? std::vector<int>{256, 1024, 4096} : cfg.n_values;
  const int replicas = cfg.replicas ? *cfg.replicas : 200;

  monodim::experiments::ReplicaStudy combined;
  combined.n_values = {};
  combined.replicas = replicas;
  combined.base_seed = seed;

  // One size at a time so that partial results reach disk before any failure
  // surfaces. Stream keying makes the assembled study identical to a single
  // multi-size run.
  std::string matrix_csv;
  for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
    monodim::experiments::StudyConfig study_cfg{
        dist, w, {n_values[ni]}, replicas, seed, cfg.threads};
    if (cfg.tol) study_cfg.fp_tol = *cfg.tol;
    try {
      auto part = monodim::experiments::run_pressure_study(study_cfg);
      combined.n_values.push_back(n_values[ni]);
      combined.pressures.push_back(std::move(part.pressures[0]));
      combined.summary.push_back(part.summary[0]);
      combined.target_pressure = part.target_pressure;
      matrix_csv = monodim::report::study_csv("pressure", dist.name(), w, combined);
      if (!cfg.out_path.empty()) write_file(cfg.out_path, matrix_csv);
    } catch (const std::exception&) {
      if (!cfg.out_path.empty() && !matrix_csv.empty()) {
        write_file(cfg.out_path, matrix_csv);
      }
      throw;
    }
  }

  std::vector<monodim::experiments::DecayRow> decay;
  if (combined.summary.size() >= 2) {
    decay = monodim::experiments::self_averaging_decay(combined);
  }
  const auto bounds =
      monodim::variational::xi_star_bounds(make_params(cfg, w), dist);
  std::vector<double> annealed;
  annealed.reserve(combined.n_values.size());
  for (int n : combined.n_values) {
    annealed.push_back(
        monodim::exact::mean_partition_bound(n, w, dist.mean())
            .exact_log_mean_z /
        n);
  }
  const std::string summary_json = monodim::report::study_summary_json(
      "pressure", dist.name(), w, combined, decay, bounds, annealed);

  std::string digest = "study " + dist.name() + " w=" + std::to_string(w) +
                       " replicas=" + std::to_string(replicas) + "\n";
  for (const auto& s : combined.summary) {
    char line[200];
    std::snprintf(line, sizeof(line),
                  "  N=%-6d mean=%.8f std=%.3e gap=%.3e\n", s.n, s.mean,
                  s.std_dev, std::abs(s.mean - combined.target_pressure));
    digest += line;
  }
  {
    char line[120];
    std::snprintf(line, sizeof(line), "  target pressure = %.10f\n",
                  combined.target_pressure);
    digest += line;
  }
  for (const auto& d : decay) {
    char line[200];
    if (d.degenerate) {
      std::snprintf(line, sizeof(line),
                    "  decay %d->%d: degenerate (deterministic disorder)\n",
                    d.n_prev, d.n);
    } else {
      std::snprintf(line, sizeof(line), "  decay %d->%d: std ratio %.3f%s\n",
                    d.n_prev, d.n, d.ratio, d.flagged ? " [flagged]" : "");
    }
    digest += line;
  }

  std::cout << digest;
  if (!cfg.out_path.empty()) {
    write_file(sibling_json_path(cfg.out_path), summary_json + "\n");
  } else {
    std::cout << summary_json << "\n";
  }
  return kExitOk;
}

int cmd_lln(const RunConfig& cfg) {
  auto dist = require_dist(cfg);
  const double w = require_w(cfg);
  const std::uint64_t seed = require_seed(cfg);

  monodim::experiments::LlnConfig lln_cfg{
      dist,
      w,
      0.0,
      cfg.n_values.empty() ? std::vector<int>{256, 1024} : cfg.n_values,
      cfg.replicas ? *cfg.replicas : 200,
      seed,
      cfg.grid_points ? *cfg.grid_points : 512,
      cfg.threads};
  if (cfg.big_m) {
    lln_cfg.big_m = *cfg.big_m;
  } else {
    const auto bounds =
        monodim::variational::xi_star_bounds(make_params(cfg, w), dist);
    lln_cfg.big_m = 3.0 * bounds.upper;
  }

  const auto result = monodim::experiments::uniform_lln_study(lln_cfg);

  std::string digest = "lln " + dist.name() + " w=" + std::to_string(w) +
                       " M=" + std::to_string(lln_cfg.big_m) + "\n";
  for (const auto& s : result.per_n) {
    char line[240];
    std::snprintf(line, sizeof(line),
                  "  N=%-6d median D_N=%.6e max=%.6e reflection_violations=%d "
                  "envelope_violations=%d/%d\n",
                  s.n, s.median_dev, s.max_dev, s.reflection_violations,
                  s.envelope_violations, s.envelope_checked);
    digest += line;
  }

  std::cout << digest;
  const std::string csv = monodim::report::lln_csv(dist.name(), w, seed,
                                                   lln_cfg.n_values, result);
  const std::string summary =
      monodim::report::lln_summary_json(dist.name(), w, result);
  if (!cfg.out_path.empty()) {
    write_file(cfg.out_path, csv);
    write_file(sibling_json_path(cfg.out_path), summary + "\n");
  } else {
    std::cout << summary << "\n";
  }
  return kExitOk;
}

int cmd_bounds(const RunConfig& cfg) {
  const auto dist = require_dist(cfg);
  const double w = require_w(cfg);
  const auto bounds =
      monodim::variational::xi_star_bounds(make_params(cfg, w), dist);

  std::optional<double> azuma;
  std::string azuma_note;
  if (cfg.t && cfg.n) {
    monodim::experiments::ConcentrationBoundInputs inputs;
    inputs.t = *cfg.t;
    inputs.n = *cfg.n;
    inputs.q = cfg.q ? *cfg.q : 4.0;
    inputs.c1 = cfg.c1 ? *cfg.c1 : w / *cfg.n;
    inputs.c2 = cfg.c2 ? *cfg.c2 : dist.mean();
    inputs.c3 = 0.0;
    if (cfg.c3) {
      inputs.c3 = *cfg.c3;
    } else if (dist.inv_mean_finite()) {
      inputs.c3 = dist.inv_mean();
    } else {
      azuma_note = "E[1/x] diverges for this law; supply --c3 explicitly";
    }
    if (azuma_note.empty()) {
      azuma = monodim::experiments::azuma_bound(inputs);
    }
  } else {
    azuma_note = "supply --t and --n to evaluate the concentration bound";
  }

  char digest[256];
  std::snprintf(digest, sizeof(digest),
                "bounds %s w=%g: %.12g <= xi* <= %.12g%s%s\n",
                dist.name().c_str(), w, bounds.lower, bounds.upper,
                azuma ? ", concentration bound " : "",
                azuma ? monodim::report::g17(*azuma).c_str() : "");

  const std::string record =
      monodim::report::bounds_json(dist.name(), w, bounds, azuma, azuma_note) +
      "\n";
  emit_record(cfg, record, digest);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean-field monomer-dimer model with random monomer activities"};
  app.require_subcommand(0, 1);

  const std::vector<std::string> commands = {
      "solve", "curve", "exact", "oracle-check", "study", "lln", "bounds"};
  std::vector<CliValues> values(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i]);
    add_common_options(sub, values[i]);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  int selected = -1;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) selected = static_cast<int>(i);
  }
  if (selected < 0) {
    std::string joined;
    for (const auto& c : commands) {
      if (!joined.empty()) joined += '|';
      joined += c;
    }
    std::cerr << "usage: monodim <" << joined << "> [options]\n";
    return kExitUsage;
  }

  try {
    const RunConfig cfg =
        merge_config(subs[selected], values[selected], commands[selected]);
    switch (selected) {
      case 0:
        return cmd_solve(cfg);
      case 1:
        return cmd_curve(cfg);
      case 2:
        return cmd_exact(cfg);
      case 3:
        return cmd_oracle_check(cfg);
      case 4:
        return cmd_study(cfg);
      case 5:
        return cmd_lln(cfg);
      case 6:
        return cmd_bounds(cfg);
    }
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
