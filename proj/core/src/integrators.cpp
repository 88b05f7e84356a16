#include <cmath>
#include <utility>

#include "recipe.hpp"
#include "stabflow/integrators.hpp"

namespace stabflow {

namespace {

void check_finite(const State& y, int stage) {
  for (double v : y)
    if (!std::isfinite(v)) throw DivergedError(stage, "non-finite stage value");
}

double scaled_error(const State& err, const State& y0, const State& y1, const ErrorScale& scale) {
  State ref(y0.size());
  for (std::size_t k = 0; k < ref.size(); ++k) ref[k] = std::max(std::abs(y0[k]), std::abs(y1[k]));
  return weighted_rms_norm(err, ref, scale.atol, scale.rtol);
}

struct EngineOut {
  State y;
  State f_last;   // F_{s-1}
  State f_prev;   // F_{s-2}
  State f0;
  int f_evals = 0;
};

EngineOut run_recipe(const Rhs& f, const State& y0, double t, double dt, const detail::Recipe& r,
                     const StageHook& hook) {
  const int s = static_cast<int>(r.stages.size());
  const std::size_t n = y0.size();
  EngineOut out;
  out.f0.resize(n);
  f(t, y0, out.f0);
  out.f_evals = 1;
  check_finite(out.f0, 1);

  State bm1 = y0, bm2 = y0;
  State fm1 = out.f0, fm2 = out.f0;
  State g(n), u(n), fj(n);
  const bool hooked = hook.mode != HookMode::none && hook.callback;

  for (int j = 1; j <= s; ++j) {
    const detail::StageSpec& st = r.stages[j - 1];
    for (std::size_t k = 0; k < n; ++k) {
      const double base = y0[k];
      g[k] = base + st.alpha * (bm1[k] - base) + (st.beta != 0.0 ? st.beta * (bm2[k] - base) : 0.0);
    }
    for (const auto& term : st.terms) {
      const State& F = (term.index == j - 1) ? fm1 : (term.index == j - 2) ? fm2 : out.f0;
      const double w = dt * term.coef;
      for (std::size_t k = 0; k < n; ++k) g[k] += w * F[k];
    }
    check_finite(g, j + 1);
    const double tj = t + r.node[j] * dt;

    const State* stage = &g;
    if (hooked) {
      hook.callback(j + 1, r.node[j], tj, g, u);
      stage = &u;
    }

    if (j == s) {
      out.y = *stage;
      break;
    }

    f(tj, *stage, fj);
    ++out.f_evals;
    check_finite(fj, j + 1);

    std::swap(fm2, fm1);
    std::swap(fm1, fj);
    std::swap(bm2, bm1);
    if (hooked && hook.mode == HookMode::project_state)
      bm1 = u;
    else
      bm1 = g;
  }
  out.f_last = std::move(fm1);
  out.f_prev = std::move(fm2);
  return out;
}

}  // namespace

StepResult rkc_step(const Rhs& f, const State& y, double t, double dt, const RkcTableau& tab,
                    const StageHook& hook, ErrorScale scale) {
  auto r = detail::rkc_recipe(tab);
  auto eo = run_recipe(f, y, t, dt, r, hook);
  StepResult res;
  res.f_evals = eo.f_evals;
  if (scale.estimate) {
    State f1(y.size());
    f(t + dt, eo.y, f1);
    ++res.f_evals;
    State err(y.size());
    for (std::size_t k = 0; k < err.size(); ++k)
      err[k] = (12.0 * (y[k] - eo.y[k]) + 6.0 * dt * (eo.f0[k] + f1[k])) / 15.0;
    res.err = scaled_error(err, y, eo.y, scale);
  }
  res.y = std::move(eo.y);
  return res;
}

StepResult rock2_step(const Rhs& f, const State& y, double t, double dt, const Rock2Tableau& tab,
                      const StageHook& hook, ErrorScale scale) {
  auto r = detail::rock2_recipe(tab);
  auto eo = run_recipe(f, y, t, dt, r, hook);
  StepResult res;
  res.f_evals = eo.f_evals;
  if (scale.estimate) {
    const double w = dt * tab.sigma * (1.0 - tab.tau / (tab.sigma * tab.sigma));
    State err(y.size());
    for (std::size_t k = 0; k < err.size(); ++k) err[k] = w * (eo.f_last[k] - eo.f_prev[k]);
    res.err = scaled_error(err, y, eo.y, scale);
  }
  res.y = std::move(eo.y);
  return res;
}

StepResult rk4_step(const Rhs& f, const State& y, double t, double dt, const StageHook& hook) {
  const std::size_t n = y.size();
  const bool hooked = hook.mode != HookMode::none && hook.callback;
  State k1(n), k2(n), k3(n), k4(n), g(n), u(n);
  auto stage = [&](int i, double c, const State& k, double w) -> const State& {
    for (std::size_t q = 0; q < n; ++q) g[q] = y[q] + w * k[q];
    check_finite(g, i);
    if (!hooked) return g;
    hook.callback(i, c, t + c * dt, g, u);
    return u;
  };
  f(t, y, k1);
  f(t + 0.5 * dt, stage(2, 0.5, k1, 0.5 * dt), k2);
  f(t + 0.5 * dt, stage(3, 0.5, k2, 0.5 * dt), k3);
  f(t + dt, stage(4, 1.0, k3, dt), k4);
  for (std::size_t q = 0; q < n; ++q) g[q] = y[q] + dt / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
  check_finite(g, 5);
  StepResult res;
  res.f_evals = 4;
  if (hooked) {
    hook.callback(5, 1.0, t + dt, g, u);
    res.y = std::move(u);
  } else {
    res.y = std::move(g);
  }
  return res;
}

void CompensatedState::add(const State& increment) {
  if (increment.size() != y_.size()) throw std::invalid_argument("increment length mismatch");
  for (std::size_t k = 0; k < y_.size(); ++k) {
    const double yk = increment[k] - comp_[k];
    const double t = y_[k] + yk;
    comp_[k] = (t - y_[k]) - yk;
    y_[k] = t;
  }
}

double stability_poly_eval(Method method, int s, double z, const Rock2Table* table, double eps) {
  if (method == Method::rk4) return 1.0 + z * (1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0)));
  const Rhs f = [z](double, const State& y, State& dy) { dy[0] = z * y[0]; };
  const State y0{1.0};
  ErrorScale scale;
  scale.estimate = false;
  if (method == Method::rkc) return rkc_step(f, y0, 0.0, 1.0, rkc_tableau(s, eps), {}, scale).y[0];
  const Rock2Table& tb = table ? *table : Rock2Table::default_table();
  return rock2_step(f, y0, 0.0, 1.0, tb.get(s), {}, scale).y[0];
}

}  // namespace stabflow
