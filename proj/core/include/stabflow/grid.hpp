// Uniform MAC staggered grid on the unit square.
//
// u lives on vertical faces (i*dx, (j-1/2)*dx), i = 1..N-1, j = 1..N.
// v lives on horizontal faces ((i-1/2)*dx, j*dx), i = 1..N, j = 1..N-1.
// Scalars live at cell centres ((i-1/2)*dx, (j-1/2)*dx), i, j = 1..N.
// Boundary-normal velocities are never stored; they come from BoundaryData.
#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace stabflow {

using State = std::vector<double>;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

using VectorFn = std::function<Vec2(double t, double x, double y)>;
using ScalarFn = std::function<double(double t, double x, double y)>;

struct GridSpec {
  int N = 0;
  double dx = 0.0;
  double nu = 0.0;

  GridSpec() = default;
  GridSpec(int n, double viscosity);
  static GridSpec from_reynolds(int n, double re) { return GridSpec(n, 1.0 / re); }

  double face_x(int i) const { return i * dx; }
  double center(int i) const { return (i - 0.5) * dx; }
  std::size_t u_count() const { return static_cast<std::size_t>(N - 1) * N; }
  std::size_t v_count() const { return static_cast<std::size_t>(N) * (N - 1); }
  std::size_t state_size() const { return u_count() + v_count(); }
};

// Flattened as all u (row-major, j outer) followed by all v (row-major, j outer).
struct VelocityField {
  int N = 0;
  State data;

  VelocityField() = default;
  explicit VelocityField(int n) : N(n), data(2 * static_cast<std::size_t>(n) * (n - 1), 0.0) {}
  VelocityField(int n, State values);

  double& u(int i, int j) { return data[static_cast<std::size_t>(j - 1) * (N - 1) + (i - 1)]; }
  double u(int i, int j) const { return data[static_cast<std::size_t>(j - 1) * (N - 1) + (i - 1)]; }
  double& v(int i, int j) { return data[v_offset() + static_cast<std::size_t>(j - 1) * N + (i - 1)]; }
  double v(int i, int j) const { return data[v_offset() + static_cast<std::size_t>(j - 1) * N + (i - 1)]; }

  std::size_t v_offset() const { return static_cast<std::size_t>(N - 1) * N; }
  std::size_t size() const { return data.size(); }
};

struct CellField {
  int N = 0;
  std::vector<double> values;

  CellField() = default;
  explicit CellField(int n) : N(n), values(static_cast<std::size_t>(n) * n, 0.0) {}

  double& operator()(int i, int j) { return values[static_cast<std::size_t>(j - 1) * N + (i - 1)]; }
  double operator()(int i, int j) const { return values[static_cast<std::size_t>(j - 1) * N + (i - 1)]; }
};

// velocity_dt is optional (needed by the hidden-constraint pressure solve);
// tangential_normal_derivative returns (du/dy, dv/dx) and is only used by the
// exact-data boundary fix.
struct BoundaryData {
  VectorFn velocity;
  VectorFn velocity_dt;
  VectorFn tangential_normal_derivative;
};

// Boundary values at one instant, laid out for the stencils.
struct BoundarySamples {
  std::vector<double> u_left, u_right;   // u(0, y_{j-1/2}), u(1, y_{j-1/2}), j = 1..N
  std::vector<double> v_bottom, v_top;   // v(x_{i-1/2}, 0), v(x_{i-1/2}, 1), i = 1..N
  std::vector<double> u_bottom, u_top;   // u(x_i, 0), u(x_i, 1), i = 1..N-1
  std::vector<double> v_left, v_right;   // v(0, y_j), v(1, y_j), j = 1..N-1
};

BoundarySamples sample_boundary(const VectorFn& f, const GridSpec& spec, double t);
BoundarySamples zero_boundary(const GridSpec& spec);

VelocityField sample_velocity(const GridSpec& spec, const VectorFn& f, double t);
CellField sample_cell(const GridSpec& spec, const ScalarFn& f, double t);

// Net outward flux through the boundary, sum of normal face values times dx.
double boundary_flux(const BoundaryData& bc, const GridSpec& spec, double t);

double inf_norm(const VelocityField& a);
double inf_norm(const CellField& a);
double inf_norm(const State& a);
double mean(const CellField& a);
void remove_mean(CellField& a);

// sqrt(mean((err_k / (atol + rtol |y_k|))^2)); throws on empty input.
double weighted_rms_norm(const State& err, const State& y, double atol, double rtol);

// Coordinate <-> index maps used by the field dumps and restriction.
struct FaceIndex {
  int i = 0;
  int j = 0;
};
FaceIndex u_index_of(const GridSpec& spec, double x, double y);
FaceIndex v_index_of(const GridSpec& spec, double x, double y);
FaceIndex cell_index_of(const GridSpec& spec, double x, double y);

void write_field(std::ostream& os, const std::string& name, int N, double t,
                 const std::vector<double>& values);
void write_velocity(const std::string& dir, const VelocityField& vel, double t);
void write_pressure(const std::string& dir, const CellField& p, double t);

}  // namespace stabflow
