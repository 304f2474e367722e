#include "monodim/report.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace monodim::report {

namespace {

using nlohmann::json;

json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json solution_to_json(const variational::VariationalSolution& s) {
  return json{{"xi_star", s.xi_star},
              {"pressure", s.pressure},
              {"dimer_density", s.dimer_density},
              {"monomer_density", s.monomer_density},
              {"lower_bound", s.lower_bound},
              {"upper_bound", s.upper_bound},
              {"residual", s.residual},
              {"iterations", s.iterations},
              {"endpoint_warning", s.endpoint_warning}};
}

}  // namespace

std::string g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string solution_csv_row(double w,
                             const variational::VariationalSolution& s) {
  std::string row = g17(w);
  for (double v : {s.xi_star, s.pressure, s.dimer_density, s.monomer_density,
                   s.lower_bound, s.upper_bound, s.residual}) {
    row += ',';
    row += g17(v);
  }
  row += ',';
  row += std::to_string(s.iterations);
  return row;
}

std::string solution_json(const std::string& dist_name, double w,
                          const variational::VariationalSolution& s) {
  json j = solution_to_json(s);
  j["dist"] = dist_name;
  j["w"] = w;
  return j.dump(2);
}

std::string curve_csv(const std::vector<variational::CurvePoint>& points) {
  std::string out = kSolutionCsvHeader;
  out += '\n';
  for (const auto& point : points) {
    out += solution_csv_row(point.w, point.solution);
    out += '\n';
  }
  return out;
}

std::string curve_json(const std::string& dist_name,
                       const std::vector<variational::CurvePoint>& points) {
  json rows = json::array();
  for (const auto& point : points) {
    json j = solution_to_json(point.solution);
    j["w"] = point.w;
    rows.push_back(std::move(j));
  }
  return json{{"dist", dist_name}, {"points", rows}}.dump(2);
}

std::string engine_records_json(const std::vector<EngineRecord>& records) {
  json rows = json::array();
  for (const auto& r : records) {
    json j{{"engine", r.engine}, {"n", r.n}, {"w", r.w}, {"log_z", r.log_z}};
    j["mean_dimers"] = r.mean_dimers ? json(*r.mean_dimers) : json(nullptr);
    j["cond_estimate"] =
        r.cond_estimate ? json(*r.cond_estimate) : json(nullptr);
    rows.push_back(std::move(j));
  }
  return rows.dump(2);
}

std::string engine_records_csv(const std::vector<EngineRecord>& records) {
  std::string out = "engine,n,w,log_z,mean_dimers,cond_estimate\n";
  for (const auto& r : records) {
    out += r.engine;
    out += ',' + std::to_string(r.n);
    out += ',' + g17(r.w);
    out += ',' + g17(r.log_z);
    out += ',';
    if (r.mean_dimers) out += g17(*r.mean_dimers);
    out += ',';
    if (r.cond_estimate) out += g17(*r.cond_estimate);
    out += '\n';
  }
  return out;
}

std::string study_csv(const std::string& study_name,
                      const std::string& dist_name, double w,
                      const experiments::ReplicaStudy& study) {
  std::string out = "study,kind,w,N,replica,seed,p_N\n";
  for (std::size_t ni = 0; ni < study.n_values.size(); ++ni) {
    const int n = study.n_values[ni];
    for (int r = 0; r < study.replicas; ++r) {
      out += study_name;
      out += ',' + dist_name;
      out += ',' + g17(w);
      out += ',' + std::to_string(n);
      out += ',' + std::to_string(r);
      out += ',' +
             std::to_string(experiments::replica_seed(study.base_seed, n, r));
      out += ',' + g17(study.pressures[ni][r]);
      out += '\n';
    }
  }
  return out;
}

std::string study_summary_json(const std::string& study_name,
                               const std::string& dist_name, double w,
                               const experiments::ReplicaStudy& study,
                               const std::vector<experiments::DecayRow>& decay,
                               const variational::Bounds& xi_bounds,
                               const std::vector<double>& annealed_per_n) {
  json per_n = json::array();
  for (std::size_t i = 0; i < study.summary.size(); ++i) {
    const auto& s = study.summary[i];
    json row{{"n", s.n},
             {"mean", s.mean},
             {"std", s.std_dev},
             {"min", s.min},
             {"max", s.max},
             {"gap", std::abs(s.mean - study.target_pressure)}};
    row["annealed_pressure"] =
        i < annealed_per_n.size() ? json(annealed_per_n[i]) : json(nullptr);
    per_n.push_back(std::move(row));
  }
  json decay_rows = json::array();
  for (const auto& d : decay) {
    decay_rows.push_back(json{{"n_prev", d.n_prev},
                              {"n", d.n},
                              {"std_prev", d.std_prev},
                              {"std", d.std_dev},
                              {"ratio", finite_or_null(d.ratio)},
                              {"degenerate", d.degenerate},
                              {"flagged", d.flagged}});
  }
  return json{{"study", study_name},
              {"kind", dist_name},
              {"w", w},
              {"base_seed", study.base_seed},
              {"replicas", study.replicas},
              {"target_pressure", study.target_pressure},
              {"xi_bounds",
               {{"lower", xi_bounds.lower}, {"upper", xi_bounds.upper}}},
              {"per_n", per_n},
              {"decay", decay_rows}}
      .dump(2);
}

std::string lln_csv(const std::string& dist_name, double w,
                    std::uint64_t base_seed, const std::vector<int>& n_values,
                    const experiments::LlnResult& result) {
  std::string out = "study,kind,w,N,replica,seed,D_N\n";
  for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
    const int n = n_values[ni];
    for (std::size_t r = 0; r < result.deviations[ni].size(); ++r) {
      out += "lln";
      out += ',' + dist_name;
      out += ',' + g17(w);
      out += ',' + std::to_string(n);
      out += ',' + std::to_string(r);
      out += ',' + std::to_string(experiments::replica_seed(
                       base_seed, n, static_cast<int>(r)));
      out += ',' + g17(result.deviations[ni][r]);
      out += '\n';
    }
  }
  return out;
}

std::string lln_summary_json(const std::string& dist_name, double w,
                             const experiments::LlnResult& result) {
  json per_n = json::array();
  for (const auto& s : result.per_n) {
    per_n.push_back(json{{"n", s.n},
                         {"median_dev", s.median_dev},
                         {"q25_dev", s.q25_dev},
                         {"q75_dev", s.q75_dev},
                         {"max_dev", s.max_dev},
                         {"reflection_violations", s.reflection_violations},
                         {"envelope_violations", s.envelope_violations},
                         {"envelope_checked", s.envelope_checked}});
  }
  return json{{"study", "lln"}, {"kind", dist_name}, {"w", w},
              {"per_n", per_n}}
      .dump(2);
}

std::string bounds_json(const std::string& dist_name, double w,
                        const variational::Bounds& xi_bounds,
                        const std::optional<double>& azuma_value,
                        const std::string& azuma_note) {
  json j{{"kind", dist_name},
         {"w", w},
         {"xi_bounds",
          {{"lower", xi_bounds.lower}, {"upper", xi_bounds.upper}}}};
  j["azuma_bound"] = azuma_value ? json(*azuma_value) : json(nullptr);
  if (!azuma_note.empty()) j["azuma_note"] = azuma_note;
  return j.dump(2);
}

std::string annealed_check_csv(
    const std::string& dist_name, double w,
    const std::vector<experiments::AnnealedCheckRow>& rows) {
  std::string out = "kind,w,N,exact_log_mean_z,bound_log,slack\n";
  for (const auto& r : rows) {
    out += dist_name;
    out += ',' + g17(w);
    out += ',' + std::to_string(r.n);
    out += ',' + g17(r.exact_log_mean_z);
    out += ',' + g17(r.bound_log);
    out += ',' + g17(r.slack);
    out += '\n';
  }
  return out;
}

}  // namespace monodim::report
