// Experiment drivers: convergence, stability and efficiency studies, and the
// cavity centreline comparison.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stabflow/output.hpp"
#include "stabflow/simulation.hpp"

namespace stabflow {

// Least-squares slope of log(err) against log(h); NaN when any error is not
// positive and finite or fewer than two points are given.
double fit_slope(const std::vector<double>& h, const std::vector<double>& err);

struct ConvergencePoint {
  double h = 0.0;
  double err_u = 0.0;
  double err_p = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergencePoint> points;
  double slope_u = 0.0;
  double slope_p = 0.0;
  bool unstable = false;  // some run (or the reference) blew up
};

// Errors of runs at each dt against a reference at dt_ref on the same grid.
ConvergenceResult time_convergence(const RunConfig& base, const std::vector<double>& dts, double dt_ref);
// Errors of runs on each N against a reference on n_ref, restricted by cubic
// interpolation; every N must divide n_ref.
ConvergenceResult space_convergence(const RunConfig& base, const std::vector<int>& ns, int n_ref);
CsvTable convergence_table(const ConvergenceResult& r);

// Cubic restriction of a fine-grid field onto a coarser nested grid.
VelocityField restrict_velocity(const VelocityField& fine, int n_coarse);
CellField restrict_cell(const CellField& fine, int n_coarse);

struct StabilityVerdict {
  bool stable = false;
  double initial_norm = 0.0;
  double final_norm = 0.0;
};

// Stable iff finite throughout and the velocity norm stays within 10x the initial norm.
StabilityVerdict check_stability(const RunConfig& cfg);

// Bisection for the largest stable fixed step with cfg.stages fixed.
double max_stable_dt(const RunConfig& base, double guess, double rel_tol = 0.01);
// Smallest stage count giving a stable run at base.dt.
int min_stable_stages(const RunConfig& base, int s_start, int s_cap = 200);

struct StabilityRow {
  double key = 0.0;       // s or Re
  double measured = 0.0;  // max stable dt or min stable s
  double theoretical = 0.0;
};

std::vector<StabilityRow> stability_sweep_max_dt(const RunConfig& base, const std::vector<int>& stages);
std::vector<StabilityRow> stability_sweep_min_s(const RunConfig& base, const std::vector<double>& reynolds);
CsvTable stability_table(const std::vector<StabilityRow>& rows, const std::string& key_name,
                         const std::string& measured_name);

struct EfficiencyRow {
  double tol = 0.0;
  double wall_seconds = 0.0;
  double err_u = 0.0;
  double err_p = 0.0;
  long steps = 0;
  long rejected = 0;
  long total_stages = 0;
  bool unstable = false;
};

// Adaptive runs with atol = rtol = tol against one reference run.
std::vector<EfficiencyRow> efficiency_study(const RunConfig& base, const std::vector<double>& tolerances,
                                            const RunConfig& reference);
CsvTable efficiency_table(const std::vector<EfficiencyRow>& rows);

// Centrelines of a cavity solution: u(0.5, y) and v(x, 0.5), walls included.
std::vector<std::pair<double, double>> centreline_u(const VelocityField& vel);
std::vector<std::pair<double, double>> centreline_v(const VelocityField& vel);

struct ProfileDeviation {
  bool available = false;
  std::string notice;
  int points = 0;
  double rms = 0.0;
  double max = 0.0;
};

// Two numeric columns (coordinate, value); other lines are skipped.
std::vector<std::pair<double, double>> read_profile_csv(const std::string& path);
ProfileDeviation compare_profile(const std::vector<std::pair<double, double>>& computed,
                                 const std::vector<std::pair<double, double>>& reference);

struct GhiaResult {
  ProfileDeviation u;
  ProfileDeviation v;
};

// Missing files are reported through `notice`, never as errors.
GhiaResult ghia_compare(const VelocityField& vel, const std::string& u_csv, const std::string& v_csv);

}  // namespace stabflow
