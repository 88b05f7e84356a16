// Direct Neumann Poisson solver at cell centres, diagonalised by the 2D DCT.
#pragma once

#include "stabflow/dct.hpp"
#include "stabflow/grid.hpp"

namespace stabflow {

class PoissonSolver {
 public:
  // Odd N falls back to the naive transform; other lengths use `algorithm`.
  explicit PoissonSolver(int n, DctAlgorithm algorithm = DctAlgorithm::hybrid, int cutoff = 64);

  int size() const { return n_; }
  // lambda_{j,k} = 2 cos(j pi / N) + 2 cos(k pi / N) - 4, row-major in (k, j).
  const std::vector<double>& eigenvalues() const { return lambda_; }
  const DctPlan& plan() const { return plan_; }

  // Solves L u = rhs - mean(rhs) with zero-mean u. The discarded mean of rhs
  // is written to `discarded_mean` when given.
  CellField solve(const CellField& rhs, double* discarded_mean = nullptr) const;

 private:
  int n_;
  DctPlan plan_;
  std::vector<double> lambda_;
};

CellField solve_neumann(const PoissonSolver& solver, const CellField& rhs);

}  // namespace stabflow
