// Run configuration, method dispatch and the time loop.
#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "stabflow/coupling.hpp"
#include "stabflow/problems.hpp"

namespace stabflow {

enum class Coupling { pm1, pm1v, pm3, dae };
enum class PressureMode { p1, p2, ap1, ap2, ap2w };

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string problem = "forced";
  double re = 100.0;
  int N = 64;
  double dt = 1e-3;  // fixed step, or the initial step when adaptive
  bool adaptive = false;
  double atol = 1e-3;
  double rtol = 1e-3;
  double t_end = 1.0;
  Method integrator = Method::rock2;
  Coupling coupling = Coupling::dae;
  PressureMode pressure = PressureMode::ap1;
  int cp = 0;
  int stages = 0;  // 0 selects s from dt and the spectral radius
  double eps = 0.15;
  bool advection = true;
  DctAlgorithm dct = DctAlgorithm::hybrid;
  std::string rock2_table;  // empty: default table
  std::string out_dir;      // empty: no files written
  double blowup_factor = 1e6;
  int max_steps = 10000000;
};

// Throws ConfigError for illegal combinations.
void validate(const RunConfig& cfg);

std::string to_string(Method m);
std::string to_string(Coupling c);
std::string to_string(PressureMode p);
Method parse_method(const std::string& s);
Coupling parse_coupling(const std::string& s);
PressureMode parse_pressure(const std::string& s);

struct RunReport {
  bool unstable = false;
  double blowup_time = 0.0;
  std::string failure;

  double t_final = 0.0;
  VelocityField u;
  CellField p;  // pressure selected by cfg.pressure, zero mean
  double u0_norm = 0.0;

  long steps_accepted = 0;
  long steps_rejected = 0;
  long steps_attempted = 0;
  long total_stages = 0;
  int min_stages = 0;
  int max_stages = 0;
  long f_evals = 0;
  long poisson_solves = 0;
  double wall_seconds = 0.0;

  bool has_exact = false;
  double err_u = 0.0;  // inf-norm vs exact velocity
  double err_p = 0.0;  // inf-norm vs zero-mean exact pressure
  double max_divergence = 0.0;

  double avg_stages() const { return steps_attempted ? double(total_stages) / double(steps_attempted) : 0.0; }
};

struct StepEvent {
  long step = 0;
  double dt = 0.0;
  int s = 0;
  bool accepted = true;
  double err = 0.0;
};

using StepObserver = std::function<void(const FlowSystem&, const CouplingState&, const StepEvent&)>;

FlowSystem make_system(const RunConfig& cfg, const ProblemSpec& prob);
RunReport run_simulation(const RunConfig& cfg, const StepObserver& observer = {});

}  // namespace stabflow
