#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monodim/exact.hpp"
#include "monodim/experiments.hpp"
#include "monodim/variational.hpp"

namespace monodim::report {

/// Shortest text that round-trips a double (17 significant digits).
std::string g17(double value);

// --- variational records ---------------------------------------------------

inline constexpr const char* kSolutionCsvHeader =
    "w,xi_star,pressure,dimer_density,monomer_density,lower,upper,residual,"
    "iterations";

std::string solution_csv_row(double w,
                             const variational::VariationalSolution& solution);

std::string solution_json(const std::string& dist_name, double w,
                          const variational::VariationalSolution& solution);

std::string curve_csv(const std::vector<variational::CurvePoint>& points);
std::string curve_json(const std::string& dist_name,
                       const std::vector<variational::CurvePoint>& points);

// --- exact-engine records ----------------------------------------------------

struct EngineRecord {
  std::string engine;
  int n;
  double w;
  double log_z;
  std::optional<double> mean_dimers;
  std::optional<double> cond_estimate;
};

std::string engine_records_json(const std::vector<EngineRecord>& records);
std::string engine_records_csv(const std::vector<EngineRecord>& records);

// --- study records -----------------------------------------------------------

/// Long-format replica matrix: study,kind,w,N,replica,seed,p_N.
std::string study_csv(const std::string& study_name,
                      const std::string& dist_name, double w,
                      const experiments::ReplicaStudy& study);

/// Per-N statistics plus target pressure, the maximizer bracket, and the
/// per-N annealed pressure bound (1/N) log E[Z_N].
std::string study_summary_json(const std::string& study_name,
                               const std::string& dist_name, double w,
                               const experiments::ReplicaStudy& study,
                               const std::vector<experiments::DecayRow>& decay,
                               const variational::Bounds& xi_bounds,
                               const std::vector<double>& annealed_per_n);

/// Long-format sup-deviation matrix: study,kind,w,N,replica,seed,D_N.
std::string lln_csv(const std::string& dist_name, double w,
                    std::uint64_t base_seed,
                    const std::vector<int>& n_values,
                    const experiments::LlnResult& result);

std::string lln_summary_json(const std::string& dist_name, double w,
                             const experiments::LlnResult& result);

std::string bounds_json(const std::string& dist_name, double w,
                        const variational::Bounds& xi_bounds,
                        const std::optional<double>& azuma_value,
                        const std::string& azuma_note);

std::string annealed_check_csv(
    const std::string& dist_name, double w,
    const std::vector<experiments::AnnealedCheckRow>& rows);

}  // namespace monodim::report
