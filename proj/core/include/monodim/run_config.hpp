#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monodim/distribution.hpp"

namespace monodim::config {

/// One CLI invocation, merged from flags and an optional config file
/// (flags win).
struct RunConfig {
  std::string command;
  std::string dist_spec;
  std::optional<double> w;
  std::vector<double> w_grid;
  std::optional<int> n;
  std::vector<int> n_values;
  std::optional<int> replicas;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string out_path;
  std::string format = "csv";
  int threads = 0;  // 0 = hardware

  // command-specific knobs
  std::optional<double> big_m;
  std::optional<int> grid_points;
  std::optional<int> nodes;
  std::optional<int> instances;
  std::string engine = "all";
  std::string activities_file;
  std::optional<double> t;
  std::optional<double> q;
  std::optional<double> c1;
  std::optional<double> c2;
  std::optional<double> c3;
};

/// Parses a distribution declaration. Two grammars are accepted:
///   flag form:   kind:params   e.g. "dirac:1", "uniform:0.5,1.5",
///                "lognormal:0,1", "gamma:2,0.5", "exponential:1.5",
///                "discrete:1=0.5,3=0.5"
///   table form:  { kind = "uniform", a = 0.5, b = 1.5 }   as written in a
///                run-config file; discrete atoms are the string form,
///                { kind = "discrete", atoms = "1=0.5,3=0.5" }.
/// Throws std::invalid_argument with field context on malformed input.
ActivityDistribution parse_dist_spec(const std::string& spec);

/// Reads a key = value config file with [section] tables into `config`.
/// Unknown keys are rejected with file:line context.
void apply_config_file(RunConfig& config, const std::string& path);

/// Parses one activity per line; rejects non-positive or malformed values
/// naming the offending row.
std::vector<double> read_activities_file(const std::string& path);

std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

}  // namespace monodim::config
