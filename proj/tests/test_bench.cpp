#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "doctest.h"
#include "stabflow/config.hpp"
#include "stabflow/studies.hpp"
#include "support.hpp"

using namespace stabflow;
namespace ts = testsupport;

namespace {

struct Point {
  double x, y;
};

std::vector<Point> random_points(int count) {
  std::vector<Point> pts;
  for (int k = 0; k < count; ++k) pts.push_back({0.5 + 0.45 * ts::uniform(), 0.5 + 0.45 * ts::uniform()});
  return pts;
}

RunConfig taylor_config() {
  RunConfig cfg;
  cfg.problem = "taylor";
  cfg.N = 32;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  cfg.integrator = Method::rock2;
  cfg.coupling = Coupling::dae;
  cfg.pressure = PressureMode::ap1;
  return cfg;
}

RunConfig small_forced() {
  RunConfig cfg;
  cfg.N = 16;
  cfg.dt = 1e-2;
  cfg.t_end = 0.2;
  return cfg;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("forced flow vanishes at t = pi/2") {
  const auto prob = forced_flow(100.0);
  for (const auto& p : random_points(20)) {
    const auto u = prob.exact->velocity(M_PI / 2, p.x, p.y);
    CHECK(std::abs(u.x) <= 1e-15);
    CHECK(std::abs(u.y) <= 1e-15);
  }
}

TEST_CASE("forced flow is divergence free") {
  const auto prob = forced_flow(100.0);
  const auto& vel = prob.exact->velocity;
  const double h = 1e-4;
  for (const auto& p : random_points(100)) {
    const double t = 2.0 * ts::uniform();
    const double div = (vel(t, p.x + h, p.y).x - vel(t, p.x - h, p.y).x) / (2 * h) +
                       (vel(t, p.x, p.y + h).y - vel(t, p.x, p.y - h).y) / (2 * h);
    CHECK(std::abs(div) <= 1e-6);
  }
}

namespace {

// Largest centred-difference residual of the momentum equations over pts.
double momentum_residual(double re, double h, const std::vector<Point>& pts, const std::vector<double>& times) {
  const auto prob = forced_flow(re);
  const auto& U = prob.exact->velocity;
  const auto& P = prob.exact->pressure;
  const double nu = 1.0 / re;
  double worst = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double t = times[k], x = pts[k].x, y = pts[k].y;
    const Vec2 c = U(t, x, y);
    const Vec2 xp = U(t, x + h, y), xm = U(t, x - h, y), yp = U(t, x, y + h), ym = U(t, x, y - h);
    const Vec2 tp = U(t + h, x, y), tm = U(t - h, x, y);
    const double px = (P(t, x + h, y) - P(t, x - h, y)) / (2 * h);
    const double py = (P(t, x, y + h) - P(t, x, y - h)) / (2 * h);
    const double fu = (tp.x - tm.x) / (2 * h) + c.x * (xp.x - xm.x) / (2 * h) + c.y * (yp.x - ym.x) / (2 * h) +
                      px - nu * (xp.x + xm.x + yp.x + ym.x - 4 * c.x) / (h * h);
    const double fv = (tp.y - tm.y) / (2 * h) + c.x * (xp.y - xm.y) / (2 * h) + c.y * (yp.y - ym.y) / (2 * h) +
                      py - nu * (xp.y + xm.y + yp.y + ym.y - 4 * c.y) / (h * h);
    const Vec2 f = prob.forcing(t, x, y);
    worst = std::max({worst, std::abs(f.x - fu), std::abs(f.y - fv)});
  }
  return worst;
}

}  // namespace

TEST_CASE("forced flow forcing balances the momentum equations") {
  const auto pts = random_points(100);
  std::vector<double> times;
  for (std::size_t k = 0; k < pts.size(); ++k) times.push_back(2.0 * ts::uniform());
  CHECK(momentum_residual(100.0, 1e-3, pts, times) <= 1e-4);
  // At Re = 1 the viscous truncation term dominates; the residual must fall as h^2.
  const double r1 = momentum_residual(1.0, 1e-3, pts, times), r2 = momentum_residual(1.0, 5e-4, pts, times);
  CHECK(r1 <= 1e-3);
  CHECK(r2 / r1 == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("forcing_field samples the pointwise forcing") {
  const auto prob = forced_flow(100.0);
  const GridSpec g(16, 0.01);
  VelocityField out(16);
  prob.forcing_field(0.7, g, out);
  CHECK(ts::max_abs_diff(out.data, sample_velocity(g, prob.forcing, 0.7).data) <= 1e-14);
}

TEST_CASE("Green-Taylor vortex") {
  const double re = 100.0;
  const auto prob = green_taylor(re);
  CHECK(!prob.forcing);
  CHECK(prob.exact->pressure(0.0, 0.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  for (const auto& p : random_points(20)) {
    const auto u0 = prob.exact->velocity(0.0, p.x, p.y);
    CHECK(u0.x == doctest::Approx(-std::sin(M_PI * p.x) * std::cos(M_PI * p.y)).epsilon(1e-15));
    const double t = ts::uniform() + 1.0;
    const auto ut = prob.exact->velocity(t, p.x, p.y);
    const double decay = std::exp(-2.0 * M_PI * M_PI * t / re);
    CHECK(ut.x == doctest::Approx(u0.x * decay).epsilon(1e-13));
    CHECK(ut.y == doctest::Approx(u0.y * decay).epsilon(1e-13));
    const auto dt = prob.boundary.velocity_dt(t, p.x, p.y);
    CHECK(dt.x == doctest::Approx(-2.0 * M_PI * M_PI / re * ut.x).epsilon(1e-13));
  }
}

TEST_CASE("lid-driven cavity") {
  const auto prob = lid_driven_cavity(1000.0);
  CHECK(!prob.exact);
  for (double x : {0.0, 0.3, 1.0}) {
    const auto lid = prob.boundary.velocity(0.0, x, 1.0);
    CHECK(lid.x == 1.0);
    CHECK(lid.y == 0.0);
  }
  for (double y : {0.0, 0.4, 0.9}) {
    CHECK(prob.boundary.velocity(0.0, 0.0, y).x == 0.0);
    CHECK(prob.boundary.velocity(0.0, 1.0, y).x == 0.0);
  }
  double flux = 0.0;
  const int m = 64;
  for (int k = 0; k < m; ++k) {
    const double z = (k + 0.5) / m;
    flux += (prob.boundary.velocity(0.0, 1.0, z).x - prob.boundary.velocity(0.0, 0.0, z).x +
             prob.boundary.velocity(0.0, z, 1.0).y - prob.boundary.velocity(0.0, z, 0.0).y) / m;
  }
  CHECK(flux == 0.0);
  const GridSpec g(16, 1e-3);
  const auto u0 = sample_velocity(g, prob.initial, 0.0);
  CHECK(inf_norm(u0) == 0.0);
  CHECK(inf_norm(divergence(u0, prob.boundary, g, 0.0)) == 0.0);
}

TEST_CASE("initial state matches the exact solution") {
  for (const char* name : {"forced", "taylor"}) {
    const auto prob = make_problem(name, 100.0);
    for (const auto& p : random_points(20)) {
      const auto b = prob.exact->velocity(prob.t0, p.x, p.y);
      const auto i = prob.initial(prob.t0, p.x, p.y);
      CHECK(std::abs(i.x - b.x) <= 1e-14);
      CHECK(std::abs(i.y - b.y) <= 1e-14);
    }
  }
  CHECK_THROWS(make_problem("channel", 1.0));
}

TEST_CASE("run_simulation: Green-Taylor accuracy") {
  const auto rep = run_simulation(taylor_config());
  REQUIRE(!rep.unstable);
  CHECK(rep.has_exact);
  CHECK(rep.err_u <= 5e-3);
  CHECK(rep.err_p <= 5e-3);
  CHECK(rep.t_final == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("run_simulation: cavity with zero end time") {
  RunConfig cfg;
  cfg.problem = "cavity";
  cfg.re = 1000.0;
  cfg.N = 16;
  cfg.t_end = 0.0;
  const auto rep = run_simulation(cfg);
  CHECK(rep.steps_attempted == 0);
  CHECK(rep.steps_accepted == 0);
  CHECK(inf_norm(rep.u) == 0.0);
  CHECK(!rep.has_exact);
}

TEST_CASE("run_simulation: PIROCK with a large step is unstable") {
  RunConfig cfg;
  cfg.N = 64;
  cfg.dt = 1e-2;
  cfg.integrator = Method::pirock;
  cfg.coupling = Coupling::pm1;
  cfg.pressure = PressureMode::p1;
  const auto rep = run_simulation(cfg);
  CHECK(rep.unstable);
  CHECK(rep.blowup_time > 0.0);
  CHECK(rep.blowup_time <= 1.0);
}

TEST_CASE("report counters") {
  RunConfig cfg = small_forced();
  cfg.adaptive = true;
  cfg.atol = cfg.rtol = 1e-6;
  cfg.t_end = 0.5;
  long attempted = 0, accepted = 0, stages = 0;
  const auto rep = run_simulation(cfg, [&](const FlowSystem&, const CouplingState&, const StepEvent& ev) {
    ++attempted;
    accepted += ev.accepted;
    stages += ev.s;
  });
  REQUIRE(!rep.unstable);
  CHECK(rep.steps_accepted + rep.steps_rejected == rep.steps_attempted);
  CHECK(rep.steps_attempted == attempted);
  CHECK(rep.steps_accepted == accepted);
  CHECK(rep.total_stages == stages);
  CHECK(rep.min_stages <= rep.max_stages);
  CHECK(rep.avg_stages() == doctest::Approx(double(stages) / double(attempted)));
}

TEST_CASE("runs are deterministic") {
  RunConfig cfg = small_forced();
  cfg.adaptive = true;
  const auto a = run_simulation(cfg), b = run_simulation(cfg);
  CHECK(a.u.data == b.u.data);
  CHECK(a.p.values == b.p.values);
  CHECK(a.steps_attempted == b.steps_attempted);

  RunConfig c = small_forced();
  const auto ca = time_convergence(c, {0.1, 0.05}, 0.025), cb = time_convergence(c, {0.1, 0.05}, 0.025);
  CHECK(convergence_table(ca).str() == convergence_table(cb).str());
}

TEST_CASE("numbers round trip through their text form") {
  for (int k = 0; k < 1000; ++k) {
    const double x = std::ldexp(ts::uniform(), static_cast<int>(60 * ts::uniform()));
    CHECK(std::stod(format_number(x)) == x);
  }
  CHECK(std::stod(format_number(0.1)) == 0.1);
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("fit_slope") {
  CHECK(fit_slope({0.1, 0.05, 0.025}, {1e-2, 2.5e-3, 6.25e-4}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::isnan(fit_slope({0.1, 0.05}, {0.0, 0.0})));
  CHECK(std::isnan(fit_slope({0.1}, {1.0})));
  CHECK(std::isnan(fit_slope({0.1, 0.05}, {1.0, std::numeric_limits<double>::infinity()})));
}

TEST_CASE("exactly resolved convergence study reports NaN slopes") {
  RunConfig cfg;
  cfg.problem = "cavity";
  cfg.N = 8;
  cfg.t_end = 0.0;
  const auto r = time_convergence(cfg, {0.1, 0.05, 0.025}, 0.0125);
  CHECK(std::isnan(r.slope_u));
  CHECK(std::isnan(r.slope_p));
  CHECK(r.points.size() == 3);
}

TEST_CASE("illegal combinations are rejected") {
  auto rejects = [](auto edit) {
    RunConfig cfg;
    edit(cfg);
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  };
  rejects([](RunConfig& c) {
    c.integrator = Method::rkc;
    c.adaptive = true;
    c.coupling = Coupling::dae;
  });
  rejects([](RunConfig& c) {
    c.integrator = Method::pirock;
    c.coupling = Coupling::dae;
  });
  rejects([](RunConfig& c) {
    c.integrator = Method::pirock;
    c.coupling = Coupling::pm1;
    c.pressure = PressureMode::p1;
    c.adaptive = true;
  });
  rejects([](RunConfig& c) { c.pressure = PressureMode::ap2; });
  rejects([](RunConfig& c) {
    c.integrator = Method::rkc;
    c.pressure = PressureMode::ap2w;
  });
  rejects([](RunConfig& c) {
    c.integrator = Method::rk4;
    c.adaptive = true;
  });
  rejects([](RunConfig& c) { c.N = 2; });
  rejects([](RunConfig& c) { c.cp = 2; });
  rejects([](RunConfig& c) { c.dt = 0.0; });
  rejects([](RunConfig& c) { c.re = -1.0; });
  rejects([](RunConfig& c) { c.stages = 2; });

  RunConfig ok;
  CHECK_NOTHROW(validate(ok));
  ok.integrator = Method::rkc;
  ok.coupling = Coupling::pm1;
  ok.pressure = PressureMode::p1;
  ok.adaptive = true;
  CHECK_NOTHROW(validate(ok));

  RunConfig bad;
  bad.pressure = PressureMode::ap2;
  CHECK_THROWS_AS(run_simulation(bad), ConfigError);
}

TEST_CASE("configuration files") {
  const auto m = parse_config("# comment\n\nnx = 32\nre=5  # trailing\nt_end = 0.25\nintegrator = rkc\n");
  CHECK(m.size() == 4);
  RunConfig cfg;
  apply_config(cfg, m);
  CHECK(cfg.N == 32);
  CHECK(cfg.re == 5.0);
  CHECK(cfg.t_end == 0.25);
  CHECK(cfg.integrator == Method::rkc);
  CHECK_THROWS_AS(parse_config("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(apply_config(cfg, parse_config("colour = red\n")), ConfigError);
  CHECK_THROWS_AS(apply_config(cfg, parse_config("nx = many\n")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/stabflow.cfg"), ConfigError);
}

TEST_CASE("method names") {
  for (auto m : {Method::rkc, Method::rock2, Method::pirock, Method::rk4}) CHECK(parse_method(to_string(m)) == m);
  for (auto c : {Coupling::pm1, Coupling::pm1v, Coupling::pm3, Coupling::dae})
    CHECK(parse_coupling(to_string(c)) == c);
  for (auto p : {PressureMode::p1, PressureMode::p2, PressureMode::ap1, PressureMode::ap2, PressureMode::ap2w})
    CHECK(parse_pressure(to_string(p)) == p);
  CHECK_THROWS_AS(parse_method("euler"), ConfigError);
}

TEST_CASE("profile comparison") {
  std::vector<std::pair<double, double>> computed;
  for (int k = 0; k <= 20; ++k) computed.emplace_back(k / 20.0, std::sin(k / 20.0));
  const auto same = compare_profile(computed, computed);
  CHECK(same.available);
  CHECK(same.rms == 0.0);
  CHECK(same.points == 21);

  auto shifted = computed;
  for (auto& [x, y] : shifted) y += 0.01;
  const auto d = compare_profile(computed, shifted);
  CHECK(d.rms == doctest::Approx(0.01).epsilon(1e-10));
  CHECK(d.max == doctest::Approx(0.01).epsilon(1e-10));

  // Reference ordinates between samples use linear interpolation.
  const auto mid = compare_profile({{0.0, 0.0}, {1.0, 2.0}}, {{0.25, 0.5}});
  CHECK(mid.rms <= 1e-15);

  const auto g = ghia_compare(VelocityField(8), "/nonexistent/u.csv", "");
  CHECK(!g.u.available);
  CHECK(!g.v.available);
  CHECK(!g.u.notice.empty());
  CHECK(!g.v.notice.empty());
}

TEST_CASE("profile files") {
  const auto dir = std::filesystem::temp_directory_path() / "stabflow_profile_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "u.csv").string();
  {
    std::ofstream out(path);
    out << "y,u\n0,0\n0.5,-0.2\n1,1\n";
  }
  const auto prof = read_profile_csv(path);
  REQUIRE(prof.size() == 3);
  CHECK(prof[1].first == 0.5);
  CHECK(prof[1].second == -0.2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("centrelines") {
  const int n = 16;
  const GridSpec g(n, 1.0);
  const auto vel = sample_velocity(g, green_taylor(1.0).initial, 0.0);
  const auto cu = centreline_u(vel);
  REQUIRE(cu.size() == static_cast<std::size_t>(n + 2));
  CHECK(cu.front() == std::make_pair(0.0, 0.0));
  CHECK(cu.back() == std::make_pair(1.0, 1.0));
  for (std::size_t k = 1; k + 1 < cu.size(); ++k)
    CHECK(cu[k].second == doctest::Approx(-std::cos(M_PI * cu[k].first)).epsilon(1e-13));
  const auto cv = centreline_v(vel);
  for (std::size_t k = 1; k + 1 < cv.size(); ++k)
    CHECK(cv[k].second == doctest::Approx(std::cos(M_PI * cv[k].first)).epsilon(1e-13));
  CHECK_THROWS(centreline_u(VelocityField(9)));
}

TEST_CASE("restriction is exact for cubic fields") {
  const VectorFn cubic = [](double, double x, double y) {
    return Vec2{x * x * y - 0.5 * y * y * y + x, 2.0 * x * x * x - x * y + 0.25};
  };
  const ScalarFn pc = [](double, double x, double y) { return x * x * x + x * y * y - 2.0 * y; };
  for (int nc : {8, 16}) {
    const GridSpec fine(32, 1.0), coarse(nc, 1.0);
    const auto r = restrict_velocity(sample_velocity(fine, cubic, 0.0), nc);
    CHECK(ts::max_abs_diff(r.data, sample_velocity(coarse, cubic, 0.0).data) <= 1e-12);
    const auto rp = restrict_cell(sample_cell(fine, pc, 0.0), nc);
    auto pc_coarse = sample_cell(coarse, pc, 0.0);
    remove_mean(pc_coarse);
    CHECK(ts::max_abs_diff(rp.values, pc_coarse.values) <= 1e-12);
  }
  CHECK_THROWS(restrict_velocity(VelocityField(32), 12));
}

TEST_CASE("stage requirement does not grow with the Reynolds number") {
  RunConfig base;
  base.N = 16;
  base.dt = 0.05;
  base.t_end = 0.5;
  base.advection = false;
  const auto rows = stability_sweep_min_s(base, {1.0, 4.0, 16.0, 64.0});
  REQUIRE(rows.size() == 4);
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k].measured <= rows[k - 1].measured);
  CHECK(rows.front().measured > rows.back().measured);
}

TEST_CASE("efficiency study") {
  RunConfig base;
  base.N = 16;
  base.t_end = 0.2;
  base.dt = 1e-3;
  RunConfig ref = base;
  ref.integrator = Method::rk4;
  ref.dt = 1e-4;
  const std::vector<double> tols{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  const auto rows = efficiency_study(base, tols, ref);
  REQUIRE(rows.size() == tols.size());
  int monotone = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(!rows[k].unstable);
    monotone += rows[k].err_u <= rows[k - 1].err_u;
  }
  CHECK(monotone >= 0.8 * (rows.size() - 1));
  CHECK(efficiency_table(rows).rows().size() == tols.size());

  RunConfig half = ref;
  half.dt = ref.dt / 2;
  const auto a = run_simulation(ref), b = run_simulation(half);
  CHECK(ts::max_abs_diff(a.u.data, b.u.data) <= 1e-9);
}

}
