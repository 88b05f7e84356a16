// Stage recipes shared by the RKC/ROCK2 engine and the Butcher reconstruction.
#pragma once

#include <vector>

#include "stabflow/integrators.hpp"

namespace stabflow::detail {

struct StageTerm {
  int index = 0;  // F index: 0, j-1 or j-2
  double coef = 0.0;
};

struct StageSpec {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<StageTerm> terms;
};

// stages[j-1] builds g_j, j = 1..s; node[j] is the time node of g_j (node[0] = 0).
struct Recipe {
  std::vector<StageSpec> stages;
  std::vector<double> node;
};

Recipe rkc_recipe(const RkcTableau& tab);
Recipe rock2_recipe(const Rock2Tableau& tab);

// Runs the recipe with stage values kept as coefficient vectors over F_0..F_{s-1}.
ButcherForm symbolic_butcher(const Recipe& r);

}  // namespace stabflow::detail
