// Incompressibility coupling: projection methods (PM1, PM1V, PM3), the
// per-stage DAE algorithm and pressure recovery (AP1, AP2, AP2W).
#pragma once

#include <memory>
#include <vector>

#include "stabflow/integrators.hpp"
#include "stabflow/poisson.hpp"
#include "stabflow/spatial_ops.hpp"

namespace stabflow {

// Discrete problem: grid, boundary data, momentum operator and Poisson solver.
class FlowSystem {
 public:
  FlowSystem(GridSpec spec, BoundaryData bc, MomentumRhsConfig rhs,
             DctAlgorithm algorithm = DctAlgorithm::hybrid);

  const GridSpec& spec() const { return spec_; }
  const BoundaryData& boundary() const { return bc_; }
  const MomentumRhsConfig& rhs_config() const { return rhs_; }
  const PoissonSolver& solver() const { return *solver_; }

  BoundarySamples boundary_at(double t) const { return sample_boundary(bc_.velocity, spec_, t); }
  // Boundary time derivative samples; zero when the problem supplies none.
  BoundarySamples boundary_dt_at(double t) const;

  // F(u, t) as a state-space right-hand side. With `p` set the frozen
  // pressure gradient is subtracted; `cfg` overrides the term selection.
  Rhs rhs(const CellField* p = nullptr) const;
  Rhs rhs(const CellField* p, const MomentumRhsConfig& cfg) const;

  // Projects u onto fields with div u = 0 for boundary data at t, i.e.
  // u <- u - G phi with L phi = div(u). Returns phi.
  CellField project(State& u, double t) const;

 private:
  GridSpec spec_;
  BoundaryData bc_;
  MomentumRhsConfig rhs_;
  std::shared_ptr<const PoissonSolver> solver_;
};

struct PhiEntry {
  int stage = 0;  // Butcher stage index i (1-based)
  double c = 0.0;
  CellField phi;
};

struct CouplingState {
  VelocityField u;
  CellField p;
  double t = 0.0;
  std::vector<PhiEntry> phi_log;  // DAE stages of the last step
};

// Integrator selection for one step.
struct Stepper {
  Method method = Method::rock2;
  int s = 0;
  double eps = 0.15;
  const Rock2Table* table = nullptr;  // default table when null
  ErrorScale scale{1.0, 0.0, false};
};

struct StepStats {
  double err = 0.0;
  int f_evals = 0;
  int poisson_solves = 0;
};

// Consistent initial state: projected velocity, zero-mean pressure.
CouplingState make_initial_state(const FlowSystem& sys, VelocityField u0, CellField p0, double t0);

StepStats pm1_step(const FlowSystem& sys, CouplingState& st, const Stepper& stepper, double dt);
StepStats pm1v_step(const FlowSystem& sys, CouplingState& st, const Stepper& stepper, double dt);
// PM1 with exact wall-normal derivatives of the tangential velocity.
StepStats pm3_step(const FlowSystem& sys, CouplingState& st, const Stepper& stepper, double dt);
// After the step st.p holds the first-order pressure phi_{s+1}.
StepStats dae_step(const FlowSystem& sys, CouplingState& st, const Stepper& stepper, double dt);

// p2 = p + phi2 with L phi2 = div(F(u) - G p) against the boundary time derivative.
CellField pm1_second_order_pressure(const FlowSystem& sys, const CouplingState& st);
// L p = div(F(u)) with boundary data replaced by its time derivative.
CellField ap1_pressure(const FlowSystem& sys, const VelocityField& u, double t);

// Derivative at c = 1 of the Lagrange interpolant through (c_m, c_m * dt * phi_m).
// The first node must be c = 0 (its value is zero and phi[0] is ignored).
CellField reconstruct_pressure(const std::vector<double>& c, const std::vector<const CellField*>& phi, double dt);
// Reconstruction over the logged stages `stages` (Butcher indices; 1 means t_n).
CellField ap2_pressure(const std::vector<PhiEntry>& log, const std::vector<int>& stages, double dt);

struct Ap2wCoefficients {
  int i = 0, j = 0, k = 0;
  double ci = 0.0, cj = 0.0, ck = 0.0;
  double ei = 0.0, ej = 0.0, ek = 0.0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

// e_m = c_m/2 - (1/c_m) sum_l a_ml c_l, weights cancelling the e-terms.
Ap2wCoefficients ap2w_coefficients(const std::vector<double>& c, const std::vector<double>& e, int i, int j, int k);
Ap2wCoefficients ap2w_coefficients(const ButcherForm& bf, int i = 2, int j = 3, int k = 4);
CellField ap2w_pressure(const std::vector<PhiEntry>& log, const Ap2wCoefficients& co, double dt);

}  // namespace stabflow
