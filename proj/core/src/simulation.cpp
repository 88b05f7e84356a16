#include "stabflow/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "stabflow/output.hpp"

namespace stabflow {

std::string to_string(Method m) {
  switch (m) {
    case Method::rkc: return "rkc";
    case Method::rock2: return "rock2";
    case Method::pirock: return "pirock";
    case Method::rk4: return "rk4";
  }
  return "?";
}

std::string to_string(Coupling c) {
  switch (c) {
    case Coupling::pm1: return "pm1";
    case Coupling::pm1v: return "pm1v";
    case Coupling::pm3: return "pm3";
    case Coupling::dae: return "dae";
  }
  return "?";
}

std::string to_string(PressureMode p) {
  switch (p) {
    case PressureMode::p1: return "p1";
    case PressureMode::p2: return "p2";
    case PressureMode::ap1: return "ap1";
    case PressureMode::ap2: return "ap2";
    case PressureMode::ap2w: return "ap2w";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "rkc") return Method::rkc;
  if (s == "rock2") return Method::rock2;
  if (s == "pirock") return Method::pirock;
  if (s == "rk4") return Method::rk4;
  throw ConfigError("unknown integrator '" + s + "'");
}

Coupling parse_coupling(const std::string& s) {
  if (s == "pm1") return Coupling::pm1;
  if (s == "pm1v") return Coupling::pm1v;
  if (s == "pm3") return Coupling::pm3;
  if (s == "dae") return Coupling::dae;
  throw ConfigError("unknown coupling '" + s + "'");
}

PressureMode parse_pressure(const std::string& s) {
  if (s == "p1") return PressureMode::p1;
  if (s == "p2") return PressureMode::p2;
  if (s == "ap1") return PressureMode::ap1;
  if (s == "ap2") return PressureMode::ap2;
  if (s == "ap2w") return PressureMode::ap2w;
  throw ConfigError("unknown pressure scheme '" + s + "'");
}

void validate(const RunConfig& cfg) {
  if (cfg.N < 4) throw ConfigError("nx must be at least 4");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cfg.t_end >= 0.0)) throw ConfigError("t-end must be non-negative");
  if (!(cfg.re > 0.0)) throw ConfigError("re must be positive");
  if (cfg.cp != 0 && cfg.cp != 1) throw ConfigError("cp must be 0 or 1");
  if (cfg.adaptive && !(cfg.atol > 0.0 && cfg.rtol >= 0.0)) throw ConfigError("tolerances must be positive");
  const Method m = cfg.integrator;
  if (m == Method::rkc && cfg.adaptive && cfg.coupling != Coupling::pm1)
    throw ConfigError("adaptive RKC is only valid with pm1: projected stages invalidate its error estimate");
  if (m == Method::pirock && (cfg.coupling != Coupling::pm1 || cfg.adaptive))
    throw ConfigError("pirock is available with fixed-step pm1 only");
  if (m == Method::rk4 && cfg.adaptive) throw ConfigError("rk4 has no error estimate; use a fixed step");
  if (cfg.pressure == PressureMode::ap2 && m != Method::rkc)
    throw ConfigError("ap2 needs order-2 internal stages (rkc); use ap2w with rock2");
  if (cfg.pressure == PressureMode::ap2w && m != Method::rock2)
    throw ConfigError("ap2w is only meaningful for rock2");
  if ((cfg.pressure == PressureMode::ap2 || cfg.pressure == PressureMode::ap2w) && cfg.coupling != Coupling::dae)
    throw ConfigError("ap2/ap2w reconstruct from per-stage DAE potentials; use coupling dae");
  if (cfg.stages != 0) {
    const int min_s = (m == Method::rkc) ? (cfg.pressure == PressureMode::ap2 ? 3 : 2) : 3;
    if (m != Method::rk4 && cfg.stages < min_s) throw ConfigError("too few stages for the chosen method");
  }
}

FlowSystem make_system(const RunConfig& cfg, const ProblemSpec& prob) {
  MomentumRhsConfig rc;
  rc.include_advection = cfg.advection;
  rc.forcing = prob.forcing;
  rc.forcing_field = prob.forcing_field;
  return FlowSystem(GridSpec(cfg.N, 1.0 / cfg.re), prob.boundary, rc, cfg.dct);
}

namespace {

struct PressureContext {
  const RunConfig& cfg;
  const FlowSystem& sys;
  const Rock2Table* table;
  int last_s = 0;
  double last_dt = 0.0;
};

CellField recover_pressure(PressureContext& ctx, const CouplingState& st) {
  switch (ctx.cfg.pressure) {
    case PressureMode::p1:
      return st.p;
    case PressureMode::p2:
      return pm1_second_order_pressure(ctx.sys, st);
    case PressureMode::ap1:
      return ap1_pressure(ctx.sys, st.u, st.t);
    case PressureMode::ap2:
      if (st.phi_log.empty()) return st.p;
      return ap2_pressure(st.phi_log, {1, ctx.last_s, ctx.last_s + 1}, ctx.last_dt);
    case PressureMode::ap2w:
      if (st.phi_log.empty()) return st.p;
      return ap2w_pressure(st.phi_log, ap2w_coefficients(butcher_form(ctx.table->get(ctx.last_s))), ctx.last_dt);
  }
  return st.p;
}

bool all_finite(const State& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

RunReport run_simulation(const RunConfig& cfg, const StepObserver& observer) {
  validate(cfg);
  const auto clock_start = std::chrono::steady_clock::now();
  const ProblemSpec prob = make_problem(cfg.problem, cfg.re);
  if (cfg.coupling == Coupling::pm3 && !prob.boundary.tangential_normal_derivative)
    throw ConfigError("pm3 needs exact wall derivatives, which problem '" + cfg.problem + "' does not provide");
  const FlowSystem sys = make_system(cfg, prob);
  const GridSpec& spec = sys.spec();

  const Rock2Table* table = nullptr;
  if (cfg.integrator == Method::rock2 || cfg.integrator == Method::pirock)
    table = cfg.rock2_table.empty() ? &Rock2Table::default_table() : &Rock2Table::cached(cfg.rock2_table);

  CellField p0(spec.N);
  if (prob.exact) {
    p0 = sample_cell(spec, prob.exact->pressure, prob.t0);
  }
  CouplingState st = make_initial_state(sys, sample_velocity(spec, prob.initial, prob.t0), p0, prob.t0);
  if (!prob.exact) st.p = pm1_second_order_pressure(sys, st);

  RunReport rep;
  rep.u0_norm = inf_norm(st.u);
  PressureContext pctx{cfg, sys, table};
  CellField reported = st.p;

  const double rho = spectral_radius_estimate(spec);
  const int min_s = (cfg.integrator == Method::rkc) ? (cfg.pressure == PressureMode::ap2 ? 3 : 2) : 3;

  Stepper stepper;
  stepper.method = cfg.integrator;
  stepper.eps = cfg.eps;
  stepper.table = table;
  stepper.scale = ErrorScale{cfg.atol, cfg.rtol, cfg.adaptive};

  StepController ctrl;
  ctrl.atol = cfg.atol;
  ctrl.rtol = cfg.rtol;

  const double t_end = prob.t0 + cfg.t_end;
  const double t_eps = 1e-12 * std::max(1.0, std::abs(t_end));
  double dt = cfg.dt;
  int consecutive_rejects = 0;
  rep.min_stages = std::numeric_limits<int>::max();

  auto step_once = [&](CouplingState& s, double h) -> StepStats {
    switch (cfg.coupling) {
      case Coupling::pm1: return pm1_step(sys, s, stepper, h);
      case Coupling::pm1v: return pm1v_step(sys, s, stepper, h);
      case Coupling::pm3: return pm3_step(sys, s, stepper, h);
      case Coupling::dae: return dae_step(sys, s, stepper, h);
    }
    return {};
  };

  while (st.t < t_end - t_eps) {
    if (rep.steps_attempted >= cfg.max_steps) {
      rep.failure = "step limit reached";
      break;
    }
    double h = std::min(dt, t_end - st.t);
    if (t_end - st.t - h < t_eps) h = t_end - st.t;
    int s = 4;
    if (cfg.integrator != Method::rk4) {
      s = cfg.stages > 0 ? cfg.stages
                         : select_stages(h, rho, cfg.integrator == Method::rkc ? Method::rkc : Method::rock2, min_s,
                                         200, table);
    }
    stepper.s = s;
    ++rep.steps_attempted;
    rep.total_stages += s;
    rep.min_stages = std::min(rep.min_stages, s);
    rep.max_stages = std::max(rep.max_stages, s);

    st.phi_log.clear();
    CouplingState trial = st;
    StepStats stats;
    bool diverged = false;
    try {
      stats = step_once(trial, h);
    } catch (const DivergedError& e) {
      diverged = true;
      rep.failure = e.what();
    }
    rep.f_evals += stats.f_evals;
    rep.poisson_solves += stats.poisson_solves;

    if (cfg.adaptive) {
      const double err = diverged ? std::numeric_limits<double>::infinity() : stats.err;
      const auto prop = propose_dt(ctrl, err, h);
      if (!prop.accept) {
        ++rep.steps_rejected;
        dt = prop.dt_new;
        if (observer) observer(sys, st, {rep.steps_attempted, h, s, false, err});
        if (++consecutive_rejects > 50) {
          rep.unstable = true;
          rep.blowup_time = st.t;
          if (rep.failure.empty()) rep.failure = "step size collapsed";
          break;
        }
        continue;
      }
      dt = prop.dt_new;
      consecutive_rejects = 0;
    } else if (diverged) {
      rep.unstable = true;
      rep.blowup_time = st.t + h;
      break;
    }

    st = std::move(trial);
    ++rep.steps_accepted;
    pctx.last_s = s;
    pctx.last_dt = h;

    const double unorm = inf_norm(st.u);
    if (!all_finite(st.u.data) || !(unorm <= cfg.blowup_factor * std::max(rep.u0_norm, 1.0))) {
      rep.unstable = true;
      rep.blowup_time = st.t;
      rep.failure = "velocity blow-up";
      break;
    }
    const double div = inf_norm(divergence(st.u, sys.boundary_at(st.t), spec));
    rep.max_divergence = std::max(rep.max_divergence, div / (1.0 + unorm));

    if (cfg.cp == 1 && cfg.pressure != PressureMode::p1) {
      reported = recover_pressure(pctx, st);
      ++rep.poisson_solves;
      if (cfg.coupling != Coupling::dae && cfg.pressure == PressureMode::p2) st.p = reported;
    }
    if (observer) observer(sys, st, {rep.steps_attempted, h, s, true, stats.err});
  }
  if (rep.min_stages == std::numeric_limits<int>::max()) rep.min_stages = 0;

  rep.t_final = st.t;
  if (!rep.unstable) {
    if (rep.steps_accepted == 0) {
      reported = st.p;
    } else if (cfg.cp == 0 || cfg.pressure == PressureMode::p1) {
      reported = recover_pressure(pctx, st);
      if (cfg.pressure != PressureMode::p1) ++rep.poisson_solves;
    }
    remove_mean(reported);
  }
  rep.u = st.u;
  rep.p = reported;

  if (prob.exact && !rep.unstable) {
    rep.has_exact = true;
    const auto ue = sample_velocity(spec, prob.exact->velocity, st.t);
    double eu = 0.0;
    for (std::size_t k = 0; k < ue.data.size(); ++k) eu = std::max(eu, std::abs(ue.data[k] - st.u.data[k]));
    rep.err_u = eu;
    auto pe = sample_cell(spec, prob.exact->pressure, st.t);
    remove_mean(pe);
    double ep = 0.0;
    for (std::size_t k = 0; k < pe.values.size(); ++k) ep = std::max(ep, std::abs(pe.values[k] - rep.p.values[k]));
    rep.err_p = ep;
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();

  if (!cfg.out_dir.empty()) {
    write_velocity(cfg.out_dir, rep.u, rep.t_final);
    write_pressure(cfg.out_dir, rep.p, rep.t_final);
    write_summary(cfg.out_dir + "/summary.txt", cfg, rep);
  }
  return rep;
}

}  // namespace stabflow
