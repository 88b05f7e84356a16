// Random generators and oracles shared by the unit and property tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "stabflow/grid.hpp"

namespace testsupport {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline std::vector<double> random_vector(std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(lo, hi);
  return v;
}

inline stabflow::CellField random_cell(int n) {
  stabflow::CellField f(n);
  for (auto& x : f.values) x = uniform();
  return f;
}

inline stabflow::CellField random_mean_free_cell(int n) {
  auto f = random_cell(n);
  stabflow::remove_mean(f);
  return f;
}

inline stabflow::VelocityField random_velocity(int n) {
  stabflow::VelocityField f(n);
  for (auto& x : f.data) x = uniform();
  return f;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

// 5-point Laplacian with mirrored ghost cells, assembled entry by entry.
inline stabflow::CellField oracle_neumann_laplacian(const stabflow::CellField& phi) {
  const int n = phi.N;
  const double h = 1.0 / n;
  stabflow::CellField out(n);
  auto at = [&](int i, int j) {
    i = std::clamp(i, 1, n);
    j = std::clamp(j, 1, n);
    return phi(i, j);
  };
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= n; ++i)
      out(i, j) = (at(i - 1, j) + at(i + 1, j) + at(i, j - 1) + at(i, j + 1) - 4.0 * phi(i, j)) / (h * h);
  return out;
}

// Direct evaluation of the unscaled DCT-II.
inline std::vector<double> oracle_dct(const std::vector<double>& f) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m < n; ++m)
      out[k] += f[m] * std::cos(M_PI * double((2 * m + 1) * k) / (2.0 * double(n)));
  return out;
}

}  // namespace testsupport
