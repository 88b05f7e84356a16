#include "stabflow/coupling.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stabflow {

FlowSystem::FlowSystem(GridSpec spec, BoundaryData bc, MomentumRhsConfig rhs, DctAlgorithm algorithm)
    : spec_(spec),
      bc_(std::move(bc)),
      rhs_(std::move(rhs)),
      solver_(std::make_shared<PoissonSolver>(spec.N, algorithm)) {
  if (!bc_.velocity) throw std::invalid_argument("boundary velocity is required");
}

BoundarySamples FlowSystem::boundary_dt_at(double t) const {
  return bc_.velocity_dt ? sample_boundary(bc_.velocity_dt, spec_, t) : zero_boundary(spec_);
}

Rhs FlowSystem::rhs(const CellField* p) const {
  MomentumRhsConfig cfg = rhs_;
  cfg.include_pressure = p != nullptr;
  return rhs(p, cfg);
}

Rhs FlowSystem::rhs(const CellField* p, const MomentumRhsConfig& cfg) const {
  MomentumRhsConfig c = cfg;
  if (!p) c.include_pressure = false;
  if (c.wall == WallTreatment::exact_neumann && !bc_.tangential_normal_derivative)
    throw std::invalid_argument("PM3 requires exact boundary derivatives");
  auto scratch = std::make_shared<VelocityField>(spec_.N);
  return [this, p, c, scratch](double t, const State& y, State& dydt) {
    scratch->data = y;
    const auto b = boundary_at(t);
    BoundarySamples dn;
    const BoundarySamples* dn_ptr = nullptr;
    if (c.wall == WallTreatment::exact_neumann) {
      dn = sample_boundary(bc_.tangential_normal_derivative, spec_, t);
      dn_ptr = &dn;
    }
    VelocityField out;
    out.N = spec_.N;
    out.data.swap(dydt);
    out.data.resize(scratch->data.size());
    momentum_rhs(*scratch, p, b, dn_ptr, spec_, t, c, out);
    dydt.swap(out.data);
  };
}

CellField FlowSystem::project(State& u, double t) const {
  VelocityField v(spec_.N, std::move(u));
  const auto bc = boundary_at(t);
  auto phi = solver_->solve(divergence(v, bc, spec_));
  auto g = gradient_to_faces(phi, spec_);
  for (std::size_t k = 0; k < v.data.size(); ++k) v.data[k] -= g.data[k];
  // One refinement pass when rounding in the solve leaves a visible residual.
  const auto res = divergence(v, bc, spec_);
  if (inf_norm(res) > 1e-12 * (1.0 + inf_norm(v))) {
    const auto dphi = solver_->solve(res);
    g = gradient_to_faces(dphi, spec_);
    for (std::size_t k = 0; k < v.data.size(); ++k) v.data[k] -= g.data[k];
    for (std::size_t k = 0; k < phi.values.size(); ++k) phi.values[k] += dphi.values[k];
  }
  u = std::move(v.data);
  return phi;
}

CouplingState make_initial_state(const FlowSystem& sys, VelocityField u0, CellField p0, double t0) {
  CouplingState st;
  sys.project(u0.data, t0);
  st.u = std::move(u0);
  remove_mean(p0);
  st.p = std::move(p0);
  st.t = t0;
  return st;
}

namespace {

StepResult integrate(const Stepper& sp, const Rhs& f, const State& y, double t, double dt, const StageHook& hook) {
  switch (sp.method) {
    case Method::rkc:
      return rkc_step(f, y, t, dt, rkc_tableau(sp.s, sp.eps), hook, sp.scale);
    case Method::rock2: {
      const Rock2Table& tb = sp.table ? *sp.table : Rock2Table::default_table();
      return rock2_step(f, y, t, dt, tb.get(sp.s), hook, sp.scale);
    }
    case Method::rk4:
      return rk4_step(f, y, t, dt, hook);
    case Method::pirock:
      break;
  }
  throw std::invalid_argument("PIROCK is only available with the plain projection method");
}

void add_scaled(CellField& p, double w, const CellField& phi) {
  for (std::size_t k = 0; k < p.values.size(); ++k) p.values[k] += w * phi.values[k];
}

StepStats projection_step(const FlowSystem& sys, CouplingState& st, const Stepper& sp, double dt,
                          WallTreatment wall) {
  MomentumRhsConfig cfg = sys.rhs_config();
  cfg.include_pressure = true;
  cfg.wall = wall;
  StepResult r;
  if (sp.method == Method::pirock) {
    if (wall != WallTreatment::dirichlet) throw std::invalid_argument("PIROCK supports PM1 only");
    MomentumRhsConfig cd = cfg;
    cd.include_advection = false;
    cd.include_pressure = false;
    cd.forcing = {};
    cd.forcing_field = {};
    MomentumRhsConfig ca = cfg;
    ca.include_diffusion = false;
    const Rock2Table& tb = sp.table ? *sp.table : Rock2Table::default_table();
    r = pirock_step(sys.rhs(nullptr, cd), sys.rhs(&st.p, ca), st.u.data, st.t, dt, tb.get(sp.s));
  } else {
    r = integrate(sp, sys.rhs(&st.p, cfg), st.u.data, st.t, dt, {});
  }
  StepStats stats{r.err, r.f_evals, 1};
  const auto phi = sys.project(r.y, st.t + dt);
  st.u.data = std::move(r.y);
  add_scaled(st.p, 2.0 / dt, phi);
  remove_mean(st.p);
  st.t += dt;
  st.phi_log.clear();
  return stats;
}

}  // namespace

StepStats pm1_step(const FlowSystem& sys, CouplingState& st, const Stepper& stepper, double dt) {
  return projection_step(sys, st, stepper, dt, WallTreatment::dirichlet);
}

StepStats pm3_step(const FlowSystem& sys, CouplingState& st, const Stepper& stepper, double dt) {
  if (!sys.boundary().tangential_normal_derivative)
    throw std::invalid_argument("PM3 requires exact boundary derivatives");
  return projection_step(sys, st, stepper, dt, WallTreatment::exact_neumann);
}

StepStats pm1v_step(const FlowSystem& sys, CouplingState& st, const Stepper& stepper, double dt) {
  StepStats stats;
  CellField last_phi(sys.spec().N);
  StageHook hook;
  hook.mode = HookMode::project_state;
  hook.callback = [&](int, double, double ti, const State& raw, State& proj) {
    proj = raw;
    last_phi = sys.project(proj, ti);
    ++stats.poisson_solves;
  };
  auto r = integrate(stepper, sys.rhs(&st.p), st.u.data, st.t, dt, hook);
  stats.err = r.err;
  stats.f_evals = r.f_evals;
  st.u.data = std::move(r.y);
  add_scaled(st.p, 2.0 / dt, last_phi);
  remove_mean(st.p);
  st.t += dt;
  st.phi_log.clear();
  return stats;
}

StepStats dae_step(const FlowSystem& sys, CouplingState& st, const Stepper& stepper, double dt) {
  StepStats stats;
  st.phi_log.clear();
  StageHook hook;
  hook.mode = HookMode::project_dual_buffer;
  hook.callback = [&](int i, double c, double ti, const State& raw, State& proj) {
    if (c <= 1e-12) {
      std::ostringstream os;
      os << "degenerate node c_" << i << " = " << c;
      throw std::runtime_error(os.str());
    }
    proj = raw;
    auto phi = sys.project(proj, ti);
    ++stats.poisson_solves;
    const double w = 1.0 / (c * dt);
    for (double& x : phi.values) x *= w;
    st.phi_log.push_back({i, c, std::move(phi)});
  };
  auto r = integrate(stepper, sys.rhs(nullptr), st.u.data, st.t, dt, hook);
  stats.err = r.err;
  stats.f_evals = r.f_evals;
  st.u.data = std::move(r.y);
  st.p = st.phi_log.back().phi;
  remove_mean(st.p);
  st.t += dt;
  return stats;
}

namespace {

CellField hidden_constraint_solve(const FlowSystem& sys, const VelocityField& u, const CellField* p, double t) {
  MomentumRhsConfig cfg = sys.rhs_config();
  cfg.include_pressure = p != nullptr;
  cfg.wall = WallTreatment::dirichlet;
  VelocityField F(sys.spec().N);
  momentum_rhs(u, p, sys.boundary_at(t), nullptr, sys.spec(), t, cfg, F);
  return sys.solver().solve(divergence(F, sys.boundary_dt_at(t), sys.spec()));
}

}  // namespace

CellField pm1_second_order_pressure(const FlowSystem& sys, const CouplingState& st) {
  CellField p = st.p;
  add_scaled(p, 1.0, hidden_constraint_solve(sys, st.u, &st.p, st.t));
  remove_mean(p);
  return p;
}

CellField ap1_pressure(const FlowSystem& sys, const VelocityField& u, double t) {
  if (!sys.boundary().velocity_dt) throw std::invalid_argument("AP1 requires boundary time derivative");
  auto p = hidden_constraint_solve(sys, u, nullptr, t);
  remove_mean(p);
  return p;
}

CellField reconstruct_pressure(const std::vector<double>& c, const std::vector<const CellField*>& phi, double dt) {
  (void)dt;  // H_m = c_m dt phi_m and d/dt = (1/dt) d/dc cancel
  const std::size_t m = c.size();
  if (m < 3) throw std::invalid_argument("pressure reconstruction needs at least 3 nodes");
  if (phi.size() != m) throw std::invalid_argument("node and phi counts differ");
  if (std::abs(c[0]) > 1e-14) throw std::invalid_argument("first reconstruction node must be t_n");
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (std::abs(c[a] - c[b]) <= 1e-12) {
        std::ostringstream os;
        os << "duplicate reconstruction nodes c = " << c[a];
        throw std::invalid_argument(os.str());
      }
  CellField out;
  for (std::size_t q = 1; q < m; ++q) {
    if (!phi[q]) throw std::invalid_argument("missing phi for reconstruction node");
    if (out.N == 0) out = CellField(phi[q]->N);
    // l_q'(1)
    double dl = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      if (a == q) continue;
      double term = 1.0 / (c[q] - c[a]);
      for (std::size_t r = 0; r < m; ++r)
        if (r != q && r != a) term *= (1.0 - c[r]) / (c[q] - c[r]);
      dl += term;
    }
    add_scaled(out, c[q] * dl, *phi[q]);
  }
  remove_mean(out);
  return out;
}

namespace {

const PhiEntry& find_stage(const std::vector<PhiEntry>& log, int stage) {
  for (const auto& e : log)
    if (e.stage == stage) return e;
  throw std::invalid_argument("stage " + std::to_string(stage) + " was not logged");
}

}  // namespace

CellField ap2_pressure(const std::vector<PhiEntry>& log, const std::vector<int>& stages, double dt) {
  std::vector<double> c;
  std::vector<const CellField*> phi;
  for (int s : stages) {
    if (s == 1) {
      c.push_back(0.0);
      phi.push_back(nullptr);
    } else {
      const auto& e = find_stage(log, s);
      c.push_back(e.c);
      phi.push_back(&e.phi);
    }
  }
  if (c.empty() || c[0] != 0.0) throw std::invalid_argument("reconstruction nodes must start at t_n");
  return reconstruct_pressure(c, phi, dt);
}

Ap2wCoefficients ap2w_coefficients(const std::vector<double>& c, const std::vector<double>& e, int i, int j, int k) {
  const int n = static_cast<int>(c.size());
  if (static_cast<int>(e.size()) != n) throw std::invalid_argument("node and e counts differ");
  for (int m : {i, j, k})
    if (m < 1 || m > n) throw std::invalid_argument("AP2W stage index out of range");
  Ap2wCoefficients co;
  co.i = i;
  co.j = j;
  co.k = k;
  co.ci = c[i - 1];
  co.cj = c[j - 1];
  co.ck = c[k - 1];
  co.ei = e[i - 1];
  co.ej = e[j - 1];
  co.ek = e[k - 1];
  if (std::abs(co.ci - co.cj) <= 1e-12 || std::abs(co.ck - co.cj) <= 1e-12 || std::abs(co.ci - co.ck) <= 1e-12) {
    std::ostringstream os;
    os << "AP2W nodes are not distinct: c = (" << co.ci << ", " << co.cj << ", " << co.ck << ")";
    throw std::invalid_argument(os.str());
  }
  co.alpha = co.ej / (co.cj - co.ci);
  co.beta = co.ei / (co.ci - co.cj) - co.ek / (co.ck - co.cj);
  co.gamma = co.ej / (co.ck - co.cj);
  const double sum = co.alpha + co.beta + co.gamma;
  if (std::abs(sum) < 1e-10) {
    std::ostringstream os;
    os << "AP2W weights degenerate: alpha + beta + gamma = " << sum;
    throw std::invalid_argument(os.str());
  }
  return co;
}

Ap2wCoefficients ap2w_coefficients(const ButcherForm& bf, int i, int j, int k) {
  const auto c = bf.c();
  std::vector<double> e(c.size(), 0.0);
  for (int m : {i, j, k}) {
    if (m < 1 || m > static_cast<int>(c.size())) throw std::invalid_argument("AP2W stage index out of range");
    const double cm = c[m - 1];
    if (cm <= 1e-12) throw std::invalid_argument("AP2W stage " + std::to_string(m) + " has a zero node");
    double s = 0.0;
    for (std::size_t l = 0; l < c.size(); ++l) s += bf.a[m - 1][l] * c[l];
    e[m - 1] = cm / 2.0 - s / cm;
  }
  return ap2w_coefficients(c, e, i, j, k);
}

CellField ap2w_pressure(const std::vector<PhiEntry>& log, const Ap2wCoefficients& co, double dt) {
  if (log.empty()) throw std::invalid_argument("no logged stages");
  const auto& pi = find_stage(log, co.i).phi;
  const auto& pj = find_stage(log, co.j).phi;
  const auto& pk = find_stage(log, co.k).phi;
  const double sum = co.alpha + co.beta + co.gamma;
  CellField bar(pj.N);
  for (std::size_t q = 0; q < bar.values.size(); ++q)
    bar.values[q] = (co.alpha * pi.values[q] + co.beta * pj.values[q] + co.gamma * pk.values[q]) / sum;
  const auto& last = log.back();
  return reconstruct_pressure({0.0, co.cj, last.c}, {nullptr, &bar, &last.phi}, dt);
}

}  // namespace stabflow
