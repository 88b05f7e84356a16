// Command line driver: single runs and the experiment studies.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stabflow/config.hpp"
#include "stabflow/studies.hpp"

using namespace stabflow;

namespace {

struct CommonFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  bool adaptive = false;
  CLI::Option* adaptive_opt = nullptr;
  std::string config;

  void attach(CLI::App* app) {
    auto add = [&](const std::string& key, const std::string& help) {
      options[key] = app->add_option("--" + key, values[key], help);
    };
    add("problem", "forced | taylor | cavity");
    add("re", "Reynolds number");
    add("nx", "cells per direction");
    add("dt", "time step (initial step when adaptive)");
    adaptive_opt = app->add_flag("--adaptive", adaptive, "adaptive step size control");
    add("atol", "absolute tolerance");
    add("rtol", "relative tolerance");
    add("t-end", "final time");
    add("integrator", "rkc | rock2 | pirock | rk4");
    add("coupling", "pm1 | pm1v | pm3 | dae");
    add("pressure", "p1 | p2 | ap1 | ap2 | ap2w");
    add("cp", "0: pressure at the final time only, 1: every step");
    add("stages", "fixed stage count (0 picks s from the spectral radius)");
    add("out", "output directory");
    add("rock2-table", "ROCK2 coefficient file");
    app->add_option("--config", config, "key = value file; flags override it");
  }

  RunConfig build(RunConfig cfg) const {
    ConfigMap merged;
    if (!config.empty()) merged = load_config(config);
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) merged[key] = values.at(key);
    if (adaptive_opt->count() > 0) merged["adaptive"] = adaptive ? "1" : "0";
    apply_config(cfg, merged);
    return cfg;
  }
};

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    if (tok.rfind("2^", 0) == 0)
      out.push_back(std::pow(2.0, std::stod(tok.substr(2))));
    else
      out.push_back(std::stod(tok));
  }
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (double x : parse_doubles(s)) out.push_back(static_cast<int>(std::lround(x)));
  return out;
}

void emit(const CsvTable& t, const std::string& out_dir, const std::string& name) {
  if (out_dir.empty()) {
    std::cout << t.str();
  } else {
    const auto path = (std::filesystem::path(out_dir) / name).string();
    t.write(path);
    std::cout << "wrote " << path << '\n';
  }
}

void print_report(const RunReport& r) {
  std::cout << "t_final=" << format_number(r.t_final) << '\n'
            << "unstable=" << (r.unstable ? 1 : 0) << '\n';
  if (!r.failure.empty()) std::cout << "failure=" << r.failure << '\n';
  std::cout << "steps_accepted=" << r.steps_accepted << '\n'
            << "steps_rejected=" << r.steps_rejected << '\n'
            << "total_stages=" << r.total_stages << '\n'
            << "avg_stages=" << format_number(r.avg_stages()) << '\n'
            << "max_divergence=" << format_number(r.max_divergence) << '\n';
  if (r.has_exact)
    std::cout << "err_u=" << format_number(r.err_u) << '\n' << "err_p=" << format_number(r.err_p) << '\n';
  std::cout << "wall_seconds=" << format_number(r.wall_seconds) << '\n';
}

// Reads a field dump written by write_velocity.
std::vector<double> read_field(const std::string& path, int& n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string header;
  std::getline(in, header);
  const auto pos = header.find("N=");
  if (pos == std::string::npos) throw std::runtime_error(path + ": missing field header");
  n = std::stoi(header.substr(pos + 2));
  std::vector<double> values;
  double x;
  while (in >> x) values.push_back(x);
  return values;
}

void print_deviation(const std::string& name, const ProfileDeviation& d) {
  if (!d.available) {
    std::cout << name << ": " << d.notice << '\n';
    return;
  }
  std::cout << name << "_points=" << d.points << '\n'
            << name << "_rms=" << format_number(d.rms) << '\n'
            << name << "_max=" << format_number(d.max) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilised explicit Runge-Kutta solvers for incompressible flow"};
  app.require_subcommand(1);

  CommonFlags run_flags, conv_flags, stab_flags, eff_flags, rey_flags, ghia_flags;

  auto* run = app.add_subcommand("run", "single simulation");
  run_flags.attach(run);

  auto* conv = app.add_subcommand("convergence", "time or space convergence study");
  conv_flags.attach(conv);
  std::string axis = "time", dts = "2^-4,2^-5,2^-6,2^-7,2^-8,2^-9,2^-10", sizes = "16,32,64";
  double dt_ref = std::pow(2.0, -12);
  int n_ref = 128;
  conv->add_option("--axis", axis, "time | space")->check(CLI::IsMember({"time", "space"}));
  conv->add_option("--dts", dts, "comma separated steps (2^-m accepted)");
  conv->add_option("--dt-ref", dt_ref, "reference step for the time axis");
  conv->add_option("--sizes", sizes, "comma separated grid sizes for the space axis");
  conv->add_option("--n-ref", n_ref, "reference grid size for the space axis");

  auto* stab = app.add_subcommand("stability", "maximal stable step for a list of stage counts");
  stab_flags.attach(stab);
  std::string stage_list = "5,10,20";
  stab->add_option("--stage-list", stage_list, "comma separated stage counts");

  auto* eff = app.add_subcommand("efficiency", "work-precision data for adaptive runs");
  eff_flags.attach(eff);
  std::string tolerances = "1e-2,1e-3,1e-4,1e-5,1e-6";
  double ref_dt = 1e-4;
  eff->add_option("--tolerances", tolerances, "comma separated tolerances");
  eff->add_option("--ref-dt", ref_dt, "step of the rk4 + dae reference run");

  auto* rey = app.add_subcommand("reynolds", "minimal stable stage count against Re, advection off");
  rey_flags.attach(rey);
  std::string re_list = "1,5,10,50,100,500,1000";
  rey->add_option("--re-list", re_list, "comma separated Reynolds numbers");

  auto* ghia = app.add_subcommand("ghia", "cavity centreline comparison against reference profiles");
  ghia_flags.attach(ghia);
  std::string u_ref, v_ref, fields;
  ghia->add_option("--u-ref", u_ref, "CSV with (y, u) on x = 0.5");
  ghia->add_option("--v-ref", v_ref, "CSV with (x, v) on y = 0.5");
  ghia->add_option("--fields", fields, "directory with u.txt and v.txt instead of running");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = run_flags.build({});
      const auto rep = run_simulation(cfg);
      print_report(rep);
      return rep.unstable ? 2 : 0;
    }
    if (*conv) {
      const auto cfg = conv_flags.build({});
      ConvergenceResult r;
      if (axis == "time")
        r = time_convergence(cfg, parse_doubles(dts), dt_ref);
      else
        r = space_convergence(cfg, parse_ints(sizes), n_ref);
      emit(convergence_table(r), cfg.out_dir, "convergence_" + axis + ".csv");
      std::cout << "slope_u=" << format_number(r.slope_u) << "\nslope_p=" << format_number(r.slope_p) << '\n';
      if (r.unstable) std::cout << "note: at least one run was unstable\n";
      return 0;
    }
    if (*stab) {
      RunConfig d;
      d.re = 5.0;
      d.N = 128;
      const auto cfg = stab_flags.build(d);
      const auto rows = stability_sweep_max_dt(cfg, parse_ints(stage_list));
      emit(stability_table(rows, "s", "max_dt"), cfg.out_dir, "stability.csv");
      return 0;
    }
    if (*eff) {
      RunConfig d;
      d.adaptive = true;
      const auto cfg = eff_flags.build(d);
      RunConfig ref = cfg;
      ref.adaptive = false;
      ref.integrator = Method::rk4;
      ref.coupling = Coupling::dae;
      ref.pressure = PressureMode::ap1;
      ref.dt = ref_dt;
      const auto rows = efficiency_study(cfg, parse_doubles(tolerances), ref);
      emit(efficiency_table(rows), cfg.out_dir, "efficiency.csv");
      return 0;
    }
    if (*rey) {
      RunConfig d;
      d.dt = 1e-2;
      d.advection = false;
      const auto cfg = rey_flags.build(d);
      const auto rows = stability_sweep_min_s(cfg, parse_doubles(re_list));
      emit(stability_table(rows, "re", "min_s"), cfg.out_dir, "reynolds.csv");
      return 0;
    }
    if (*ghia) {
      VelocityField vel;
      if (!fields.empty()) {
        int nu = 0, nv = 0;
        auto u = read_field((std::filesystem::path(fields) / "u.txt").string(), nu);
        auto v = read_field((std::filesystem::path(fields) / "v.txt").string(), nv);
        if (nu != nv) throw std::runtime_error("u and v dumps have different grid sizes");
        u.insert(u.end(), v.begin(), v.end());
        vel = VelocityField(nu, std::move(u));
      } else {
        RunConfig d;
        d.problem = "cavity";
        d.re = 1000.0;
        d.N = 128;
        d.adaptive = true;
        d.t_end = 500.0;
        const auto rep = run_simulation(ghia_flags.build(d));
        print_report(rep);
        if (rep.unstable) return 2;
        vel = rep.u;
      }
      const auto g = ghia_compare(vel, u_ref, v_ref);
      print_deviation("u_centreline", g.u);
      print_deviation("v_centreline", g.v);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
