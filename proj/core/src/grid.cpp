#include "stabflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace stabflow {

GridSpec::GridSpec(int n, double viscosity) : N(n), dx(1.0 / n), nu(viscosity) {
  if (n < 4) throw std::invalid_argument("grid needs N >= 4");
  if (!(viscosity > 0.0)) throw std::invalid_argument("viscosity must be positive");
}

VelocityField::VelocityField(int n, State values) : N(n), data(std::move(values)) {
  if (data.size() != 2 * static_cast<std::size_t>(n) * (n - 1))
    throw std::invalid_argument("velocity state has wrong length");
}

BoundarySamples sample_boundary(const VectorFn& f, const GridSpec& spec, double t) {
  const int N = spec.N;
  BoundarySamples b;
  b.u_left.resize(N);
  b.u_right.resize(N);
  b.v_bottom.resize(N);
  b.v_top.resize(N);
  b.u_bottom.resize(N - 1);
  b.u_top.resize(N - 1);
  b.v_left.resize(N - 1);
  b.v_right.resize(N - 1);
  for (int k = 1; k <= N; ++k) {
    const double c = spec.center(k);
    b.u_left[k - 1] = f(t, 0.0, c).x;
    b.u_right[k - 1] = f(t, 1.0, c).x;
    b.v_bottom[k - 1] = f(t, c, 0.0).y;
    b.v_top[k - 1] = f(t, c, 1.0).y;
  }
  for (int k = 1; k < N; ++k) {
    const double s = spec.face_x(k);
    b.u_bottom[k - 1] = f(t, s, 0.0).x;
    b.u_top[k - 1] = f(t, s, 1.0).x;
    b.v_left[k - 1] = f(t, 0.0, s).y;
    b.v_right[k - 1] = f(t, 1.0, s).y;
  }
  return b;
}

BoundarySamples zero_boundary(const GridSpec& spec) {
  const auto n = static_cast<std::size_t>(spec.N);
  BoundarySamples b;
  b.u_left.assign(n, 0.0);
  b.u_right.assign(n, 0.0);
  b.v_bottom.assign(n, 0.0);
  b.v_top.assign(n, 0.0);
  b.u_bottom.assign(n - 1, 0.0);
  b.u_top.assign(n - 1, 0.0);
  b.v_left.assign(n - 1, 0.0);
  b.v_right.assign(n - 1, 0.0);
  return b;
}

VelocityField sample_velocity(const GridSpec& spec, const VectorFn& f, double t) {
  VelocityField vel(spec.N);
  const int N = spec.N;
  for (int j = 1; j <= N; ++j)
    for (int i = 1; i < N; ++i) vel.u(i, j) = f(t, spec.face_x(i), spec.center(j)).x;
  for (int j = 1; j < N; ++j)
    for (int i = 1; i <= N; ++i) vel.v(i, j) = f(t, spec.center(i), spec.face_x(j)).y;
  return vel;
}

CellField sample_cell(const GridSpec& spec, const ScalarFn& f, double t) {
  CellField c(spec.N);
  for (int j = 1; j <= spec.N; ++j)
    for (int i = 1; i <= spec.N; ++i) c(i, j) = f(t, spec.center(i), spec.center(j));
  return c;
}

double boundary_flux(const BoundaryData& bc, const GridSpec& spec, double t) {
  const auto b = sample_boundary(bc.velocity, spec, t);
  double flux = 0.0;
  for (int k = 0; k < spec.N; ++k)
    flux += (b.u_right[k] - b.u_left[k]) + (b.v_top[k] - b.v_bottom[k]);
  return flux * spec.dx;
}

double inf_norm(const State& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

double inf_norm(const VelocityField& a) { return inf_norm(a.data); }
double inf_norm(const CellField& a) { return inf_norm(a.values); }

double mean(const CellField& a) {
  double s = 0.0;
  for (double x : a.values) s += x;
  return a.values.empty() ? 0.0 : s / static_cast<double>(a.values.size());
}

void remove_mean(CellField& a) {
  const double m = mean(a);
  for (double& x : a.values) x -= m;
}

double weighted_rms_norm(const State& err, const State& y, double atol, double rtol) {
  if (err.empty()) throw std::invalid_argument("empty state");
  if (err.size() != y.size()) throw std::invalid_argument("length mismatch in weighted norm");
  double s = 0.0;
  for (std::size_t k = 0; k < err.size(); ++k) {
    const double w = err[k] / (atol + rtol * std::abs(y[k]));
    s += w * w;
  }
  return std::sqrt(s / static_cast<double>(err.size()));
}

FaceIndex u_index_of(const GridSpec& spec, double x, double y) {
  return {static_cast<int>(std::lround(x / spec.dx)), static_cast<int>(std::lround(y / spec.dx + 0.5))};
}

FaceIndex v_index_of(const GridSpec& spec, double x, double y) {
  return {static_cast<int>(std::lround(x / spec.dx + 0.5)), static_cast<int>(std::lround(y / spec.dx))};
}

FaceIndex cell_index_of(const GridSpec& spec, double x, double y) {
  return {static_cast<int>(std::lround(x / spec.dx + 0.5)), static_cast<int>(std::lround(y / spec.dx + 0.5))};
}

void write_field(std::ostream& os, const std::string& name, int N, double t,
                 const std::vector<double>& values) {
  os << "# field=" << name << " N=" << N << " t=" << std::setprecision(17) << t << '\n';
  for (double x : values) os << std::setprecision(17) << x << '\n';
}

void write_velocity(const std::string& dir, const VelocityField& vel, double t) {
  std::filesystem::create_directories(dir);
  const auto split = static_cast<std::ptrdiff_t>(vel.v_offset());
  std::ofstream fu(std::filesystem::path(dir) / "u.txt");
  write_field(fu, "u", vel.N, t, std::vector<double>(vel.data.begin(), vel.data.begin() + split));
  std::ofstream fv(std::filesystem::path(dir) / "v.txt");
  write_field(fv, "v", vel.N, t, std::vector<double>(vel.data.begin() + split, vel.data.end()));
}

void write_pressure(const std::string& dir, const CellField& p, double t) {
  std::filesystem::create_directories(dir);
  std::ofstream fp(std::filesystem::path(dir) / "p.txt");
  write_field(fp, "p", p.N, t, p.values);
}

}  // namespace stabflow
