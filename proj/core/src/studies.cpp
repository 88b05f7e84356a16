#include "stabflow/studies.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace stabflow {

double fit_slope(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = std::min(h.size(), err.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (n < 2) return nan;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(err[k] > 0.0) || !std::isfinite(err[k]) || !(h[k] > 0.0)) return nan;
    const double x = std::log(h[k]), y = std::log(err[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return nan;
  return (n * sxy - sx * sy) / den;
}

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

void finish_slopes(ConvergenceResult& r) {
  std::vector<double> h, eu, ep;
  for (const auto& p : r.points) {
    h.push_back(p.h);
    eu.push_back(p.err_u);
    ep.push_back(p.err_p);
  }
  r.slope_u = fit_slope(h, eu);
  r.slope_p = fit_slope(h, ep);
}

// Lagrange weights of the 4 nodes first..first+3 (unit spacing) at position x.
void cubic_weights(double x, int first, double w[4]) {
  for (int a = 0; a < 4; ++a) {
    double v = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) v *= (x - (first + b)) / double(a - b);
    w[a] = v;
  }
}

// Interpolation stencil on fine indices 1..n at fractional index m.
struct Stencil {
  int first = 1;
  double w[4] = {0, 0, 0, 0};
  bool exact = false;  // m is a node; weight 1 at index `first`
};

Stencil make_stencil(double m, int n) {
  Stencil st;
  const double r = std::round(m);
  if (std::abs(m - r) < 1e-9) {
    st.exact = true;
    st.first = static_cast<int>(r);
    return st;
  }
  const int lo = static_cast<int>(std::floor(m));
  st.first = std::clamp(lo - 1, 1, n - 3);
  cubic_weights(m, st.first, st.w);
  return st;
}

template <class Get>
double apply(const Stencil& sx, const Stencil& sy, Get get) {
  if (sx.exact && sy.exact) return get(sx.first, sy.first);
  double acc = 0.0;
  if (sx.exact) {
    for (int b = 0; b < 4; ++b) acc += sy.w[b] * get(sx.first, sy.first + b);
  } else if (sy.exact) {
    for (int a = 0; a < 4; ++a) acc += sx.w[a] * get(sx.first + a, sy.first);
  } else {
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a) acc += sx.w[a] * sy.w[b] * get(sx.first + a, sy.first + b);
  }
  return acc;
}

void check_nested(int fine, int coarse) {
  if (coarse < 4 || fine % coarse != 0)
    throw std::invalid_argument("grids are not nested: " + std::to_string(coarse) + " does not divide " +
                                std::to_string(fine));
}

}  // namespace

VelocityField restrict_velocity(const VelocityField& fine, int n) {
  const int nf = fine.N;
  check_nested(nf, n);
  const double r = double(nf) / n;
  VelocityField out(n);
  // Fine face index for face coordinate i/n is i*r; centre index for (j-1/2)/n is (j-1/2)r + 1/2.
  for (int j = 1; j <= n; ++j) {
    const Stencil sy = make_stencil((j - 0.5) * r + 0.5, nf);
    for (int i = 1; i < n; ++i) {
      const Stencil sx = make_stencil(i * r, nf - 1);
      out.u(i, j) = apply(sx, sy, [&](int a, int b) { return fine.u(a, b); });
    }
  }
  for (int j = 1; j < n; ++j) {
    const Stencil sy = make_stencil(j * r, nf - 1);
    for (int i = 1; i <= n; ++i) {
      const Stencil sx = make_stencil((i - 0.5) * r + 0.5, nf);
      out.v(i, j) = apply(sx, sy, [&](int a, int b) { return fine.v(a, b); });
    }
  }
  return out;
}

CellField restrict_cell(const CellField& fine, int n) {
  const int nf = fine.N;
  check_nested(nf, n);
  const double r = double(nf) / n;
  CellField out(n);
  for (int j = 1; j <= n; ++j) {
    const Stencil sy = make_stencil((j - 0.5) * r + 0.5, nf);
    for (int i = 1; i <= n; ++i) {
      const Stencil sx = make_stencil((i - 0.5) * r + 0.5, nf);
      out(i, j) = apply(sx, sy, [&](int a, int b) { return fine(a, b); });
    }
  }
  remove_mean(out);
  return out;
}

ConvergenceResult time_convergence(const RunConfig& base, const std::vector<double>& dts, double dt_ref) {
  ConvergenceResult res;
  RunConfig rc = base;
  rc.adaptive = false;
  rc.out_dir.clear();
  rc.dt = dt_ref;
  const auto ref = run_simulation(rc);
  if (ref.unstable) {
    res.unstable = true;
    return res;
  }
  for (double dt : dts) {
    rc.dt = dt;
    const auto run = run_simulation(rc);
    if (run.unstable) {
      res.unstable = true;
      res.points.push_back({dt, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()});
      continue;
    }
    res.points.push_back({dt, max_abs_diff(run.u.data, ref.u.data), max_abs_diff(run.p.values, ref.p.values)});
  }
  finish_slopes(res);
  return res;
}

ConvergenceResult space_convergence(const RunConfig& base, const std::vector<int>& ns, int n_ref) {
  for (int n : ns) check_nested(n_ref, n);
  ConvergenceResult res;
  RunConfig rc = base;
  rc.adaptive = false;
  rc.out_dir.clear();
  rc.N = n_ref;
  const auto ref = run_simulation(rc);
  if (ref.unstable) {
    res.unstable = true;
    return res;
  }
  for (int n : ns) {
    rc.N = n;
    const auto run = run_simulation(rc);
    const double h = 1.0 / n;
    if (run.unstable) {
      res.unstable = true;
      res.points.push_back({h, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()});
      continue;
    }
    const auto ur = restrict_velocity(ref.u, n);
    const auto pr = restrict_cell(ref.p, n);
    res.points.push_back({h, max_abs_diff(run.u.data, ur.data), max_abs_diff(run.p.values, pr.values)});
  }
  finish_slopes(res);
  return res;
}

CsvTable convergence_table(const ConvergenceResult& r) {
  CsvTable t({"h", "err_u", "err_p", "slope_u", "slope_p"});
  for (std::size_t k = 0; k < r.points.size(); ++k) {
    const auto& p = r.points[k];
    double su = std::numeric_limits<double>::quiet_NaN(), sp = su;
    if (k > 0) {
      const auto& q = r.points[k - 1];
      su = fit_slope({q.h, p.h}, {q.err_u, p.err_u});
      sp = fit_slope({q.h, p.h}, {q.err_p, p.err_p});
    }
    t.add_row({format_number(p.h), format_number(p.err_u), format_number(p.err_p), format_number(su),
               format_number(sp)});
  }
  return t;
}

StabilityVerdict check_stability(const RunConfig& cfg) {
  RunConfig rc = cfg;
  rc.adaptive = false;
  rc.out_dir.clear();
  rc.blowup_factor = 10.0;
  const auto rep = run_simulation(rc);
  StabilityVerdict v;
  v.initial_norm = rep.u0_norm;
  v.final_norm = rep.unstable ? std::numeric_limits<double>::infinity() : inf_norm(rep.u);
  v.stable = !rep.unstable && v.final_norm <= 10.0 * std::max(rep.u0_norm, 1e-300);
  return v;
}

double max_stable_dt(const RunConfig& base, double guess, double rel_tol) {
  if (base.stages <= 0 && base.integrator != Method::rk4)
    throw std::invalid_argument("max_stable_dt needs a fixed stage count");
  auto stable = [&](double dt) {
    RunConfig rc = base;
    rc.dt = dt;
    return check_stability(rc).stable;
  };
  double lo = guess, hi = guess;
  if (stable(guess)) {
    do {
      lo = hi;
      hi *= 1.5;
    } while (stable(hi) && hi < 1e3 * guess);
  } else {
    do {
      hi = lo;
      lo /= 1.5;
    } while (!stable(lo) && lo > 1e-6 * guess);
  }
  while ((hi - lo) > rel_tol * lo) {
    const double mid = 0.5 * (lo + hi);
    (stable(mid) ? lo : hi) = mid;
  }
  return lo;
}

int min_stable_stages(const RunConfig& base, int s_start, int s_cap) {
  const int method_min = base.integrator == Method::rkc ? 2 : 3;
  int s = std::max(s_start, method_min);
  RunConfig rc = base;
  // Walk down while stable, then up until stable.
  rc.stages = s;
  if (check_stability(rc).stable) {
    while (s > method_min) {
      rc.stages = s - 1;
      if (!check_stability(rc).stable) break;
      --s;
    }
    return s;
  }
  while (s < s_cap) {
    rc.stages = ++s;
    if (check_stability(rc).stable) return s;
  }
  throw std::runtime_error("no stable stage count up to the cap");
}

namespace {

double stab_constant(Method m) { return m == Method::rkc ? 0.653 : 0.811; }

double rho_for(const RunConfig& cfg) { return spectral_radius_estimate(GridSpec(cfg.N, 1.0 / cfg.re)); }

}  // namespace

std::vector<StabilityRow> stability_sweep_max_dt(const RunConfig& base, const std::vector<int>& stages) {
  std::vector<StabilityRow> rows;
  const double rho = rho_for(base);
  for (int s : stages) {
    RunConfig rc = base;
    rc.stages = s;
    const double theory = stab_constant(base.integrator) * s * s / rho;
    rows.push_back({double(s), max_stable_dt(rc, theory), theory});
  }
  return rows;
}

std::vector<StabilityRow> stability_sweep_min_s(const RunConfig& base, const std::vector<double>& reynolds) {
  std::vector<StabilityRow> rows;
  for (double re : reynolds) {
    RunConfig rc = base;
    rc.re = re;
    const double theory = std::sqrt(base.dt * rho_for(rc) / stab_constant(base.integrator));
    const int start = static_cast<int>(std::ceil(theory));
    rows.push_back({re, double(min_stable_stages(rc, start)), theory});
  }
  return rows;
}

CsvTable stability_table(const std::vector<StabilityRow>& rows, const std::string& key_name,
                         const std::string& measured_name) {
  CsvTable t({key_name, measured_name, "theoretical", "ratio"});
  for (const auto& r : rows)
    t.add_row({format_number(r.key), format_number(r.measured), format_number(r.theoretical),
               format_number(r.measured / r.theoretical)});
  return t;
}

std::vector<EfficiencyRow> efficiency_study(const RunConfig& base, const std::vector<double>& tolerances,
                                            const RunConfig& reference) {
  RunConfig ref_cfg = reference;
  ref_cfg.out_dir.clear();
  const auto ref = run_simulation(ref_cfg);
  if (ref.unstable) throw std::runtime_error("efficiency reference run is unstable");
  std::vector<EfficiencyRow> rows;
  for (double tol : tolerances) {
    RunConfig rc = base;
    rc.adaptive = true;
    rc.atol = rc.rtol = tol;
    rc.out_dir.clear();
    const auto rep = run_simulation(rc);
    EfficiencyRow row;
    row.tol = tol;
    row.wall_seconds = rep.wall_seconds;
    row.steps = rep.steps_accepted;
    row.rejected = rep.steps_rejected;
    row.total_stages = rep.total_stages;
    row.unstable = rep.unstable;
    if (rep.unstable) {
      row.err_u = row.err_p = std::numeric_limits<double>::infinity();
    } else {
      row.err_u = max_abs_diff(rep.u.data, ref.u.data);
      row.err_p = max_abs_diff(rep.p.values, ref.p.values);
    }
    rows.push_back(row);
  }
  return rows;
}

CsvTable efficiency_table(const std::vector<EfficiencyRow>& rows) {
  CsvTable t({"tol", "wall_seconds", "err_u", "err_p", "steps", "rejected", "total_stages", "unstable"});
  for (const auto& r : rows)
    t.add_row({format_number(r.tol), format_number(r.wall_seconds), format_number(r.err_u), format_number(r.err_p),
               std::to_string(r.steps), std::to_string(r.rejected), std::to_string(r.total_stages),
               r.unstable ? "1" : "0"});
  return t;
}

std::vector<std::pair<double, double>> centreline_u(const VelocityField& vel) {
  const int n = vel.N;
  if (n % 2 != 0) throw std::invalid_argument("centrelines need an even grid size");
  std::vector<std::pair<double, double>> out{{0.0, 0.0}};
  for (int j = 1; j <= n; ++j) out.emplace_back((j - 0.5) / n, vel.u(n / 2, j));
  out.emplace_back(1.0, 1.0);
  return out;
}

std::vector<std::pair<double, double>> centreline_v(const VelocityField& vel) {
  const int n = vel.N;
  if (n % 2 != 0) throw std::invalid_argument("centrelines need an even grid size");
  std::vector<std::pair<double, double>> out{{0.0, 0.0}};
  for (int i = 1; i <= n; ++i) out.emplace_back((i - 0.5) / n, vel.v(i, n / 2));
  out.emplace_back(1.0, 0.0);
  return out;
}

std::vector<std::pair<double, double>> read_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::pair<double, double>> out;
  std::string line;
  while (std::getline(in, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a, b;
    if (ls >> a >> b) out.emplace_back(a, b);
  }
  return out;
}

ProfileDeviation compare_profile(const std::vector<std::pair<double, double>>& computed,
                                 const std::vector<std::pair<double, double>>& reference) {
  ProfileDeviation d;
  if (computed.size() < 2 || reference.empty()) {
    d.notice = "empty profile";
    return d;
  }
  double ss = 0.0;
  for (const auto& [x, ref] : reference) {
    auto it = std::lower_bound(computed.begin(), computed.end(), std::make_pair(x, -1e300));
    double val;
    if (it == computed.begin()) {
      val = computed.front().second;
    } else if (it == computed.end()) {
      val = computed.back().second;
    } else if (it->first == x) {
      val = it->second;
    } else {
      const auto& [x1, y1] = *it;
      const auto& [x0, y0] = *std::prev(it);
      val = x1 == x0 ? y1 : y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
    const double e = val - ref;
    ss += e * e;
    d.max = std::max(d.max, std::abs(e));
  }
  d.available = true;
  d.points = static_cast<int>(reference.size());
  d.rms = std::sqrt(ss / reference.size());
  return d;
}

GhiaResult ghia_compare(const VelocityField& vel, const std::string& u_csv, const std::string& v_csv) {
  GhiaResult r;
  auto one = [](const std::vector<std::pair<double, double>>& computed, const std::string& path) {
    ProfileDeviation d;
    if (path.empty() || !std::filesystem::exists(path)) {
      d.notice = "reference " + (path.empty() ? std::string("not given") : path + " not found") + "; skipped";
      return d;
    }
    return compare_profile(computed, read_profile_csv(path));
  };
  r.u = one(centreline_u(vel), u_csv);
  r.v = one(centreline_v(vel), v_csv);
  return r;
}

}  // namespace stabflow
