// Finite-difference operators on the MAC grid.
#pragma once

#include "stabflow/grid.hpp"

namespace stabflow {

// Fills `out` with the forcing sampled at the velocity unknowns.
using FieldForcing = std::function<void(double t, const GridSpec& spec, VelocityField& out)>;

enum class WallTreatment {
  dirichlet,      // tangential wall value enters the one-sided stencils
  exact_neumann,  // ghost value from the exact wall-normal derivative
};

struct MomentumRhsConfig {
  bool include_pressure = false;
  bool include_advection = true;
  bool include_diffusion = true;
  VectorFn forcing;
  FieldForcing forcing_field;  // preferred over `forcing` when set
  WallTreatment wall = WallTreatment::dirichlet;
};

CellField divergence(const VelocityField& vel, const BoundarySamples& b, const GridSpec& spec);
CellField divergence(const VelocityField& vel, const BoundaryData& bc, const GridSpec& spec, double t);

VelocityField gradient_to_faces(const CellField& phi, const GridSpec& spec);

// Five-point Laplacian with homogeneous Neumann walls (M G).
CellField neumann_laplacian(const CellField& phi, const GridSpec& spec);

VelocityField momentum_rhs(const VelocityField& vel, const CellField* p, const BoundaryData& bc,
                           const GridSpec& spec, double t, const MomentumRhsConfig& cfg);

// Allocation-free variant; `wall_dn` holds (du/dy, dv/dx) samples for the
// exact-Neumann wall treatment and may be null otherwise.
void momentum_rhs(const VelocityField& vel, const CellField* p, const BoundarySamples& b,
                  const BoundarySamples* wall_dn, const GridSpec& spec, double t,
                  const MomentumRhsConfig& cfg, VelocityField& out);

// Gershgorin bound on the spectral radius of the discrete diffusion operator.
double spectral_radius_estimate(const GridSpec& spec);

// One-sided stencils for a point half a spacing from the wall at x - h/2.
inline double wall_first_derivative(double f_wall, double f0, double f1, double h) {
  return (f1 + 3.0 * f0 - 4.0 * f_wall) / (3.0 * h);
}
inline double wall_second_derivative(double f_wall, double f0, double f1, double f2, double h) {
  return (16.0 * f_wall - 25.0 * f0 + 10.0 * f1 - f2) / (5.0 * h * h);
}

}  // namespace stabflow
