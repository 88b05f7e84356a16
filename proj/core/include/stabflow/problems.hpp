// Benchmark problems: forced flow, Green-Taylor vortex, lid-driven cavity.
#pragma once

#include <optional>
#include <string>

#include "stabflow/spatial_ops.hpp"

namespace stabflow {

struct ExactSolution {
  VectorFn velocity;
  ScalarFn pressure;
};

struct ProblemSpec {
  std::string name;
  double re = 1.0;
  BoundaryData boundary;
  VectorFn forcing;             // pointwise forcing, empty when none
  FieldForcing forcing_field;   // same forcing sampled on a whole grid
  std::optional<ExactSolution> exact;
  VectorFn initial;             // velocity at t0
  double t0 = 0.0;
};

// u = -cos t sin^2(pi x) sin(2 pi y), v = cos t sin(2 pi x) sin^2(pi y).
ProblemSpec forced_flow(double re);
ProblemSpec green_taylor(double re);
ProblemSpec lid_driven_cavity(double re);

// "forced", "taylor" or "cavity".
ProblemSpec make_problem(const std::string& name, double re);

}  // namespace stabflow
