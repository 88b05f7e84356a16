#include "stabflow/poisson.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stabflow {

namespace {

DctAlgorithm usable_algorithm(int n, DctAlgorithm requested) {
  if (n % 2 != 0) return DctAlgorithm::naive;
  const bool pow2 = (n & (n - 1)) == 0;
  if (!pow2 && (requested == DctAlgorithm::recursive || requested == DctAlgorithm::hybrid))
    return DctAlgorithm::iterative;
  return requested;
}

}  // namespace

PoissonSolver::PoissonSolver(int n, DctAlgorithm algorithm, int cutoff)
    : n_(n), plan_(n, usable_algorithm(n, algorithm), cutoff), lambda_(static_cast<std::size_t>(n) * n) {
  std::vector<double> c(n);
  for (int j = 0; j < n; ++j) c[j] = 2.0 * std::cos(j * std::numbers::pi / n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) lambda_[static_cast<std::size_t>(k) * n + j] = c[j] + c[k] - 4.0;
  lambda_[0] = 0.0;
}

CellField PoissonSolver::solve(const CellField& rhs, double* discarded_mean) const {
  if (rhs.N != n_) throw std::invalid_argument("Poisson right-hand side has wrong size");
  const double dx = 1.0 / n_;
  auto F = dct2d(plan_, rhs.values);
  if (discarded_mean) *discarded_mean = F[0] / (static_cast<double>(n_) * n_);
  F[0] = 0.0;
  for (std::size_t q = 1; q < F.size(); ++q) F[q] *= dx * dx / lambda_[q];
  CellField u(n_);
  u.values = idct2d(plan_, F);
  return u;
}

CellField solve_neumann(const PoissonSolver& solver, const CellField& rhs) { return solver.solve(rhs); }

}  // namespace stabflow
