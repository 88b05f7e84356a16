// DCT-II / DCT-III pair at half-integer sample points.
//
//   forward:  F_k = sum_n f_n cos((2n+1) k pi / (2N))            (unscaled)
//   inverse:  f_n = (2/N) [F_0/2 + sum_{k>=1} F_k cos((2n+1) k pi / (2N))]
#pragma once

#include <map>
#include <memory>
#include <vector>

namespace stabflow {

enum class DctAlgorithm { naive, iterative, recursive, hybrid };

class DctPlan {
 public:
  DctPlan(int n, DctAlgorithm algorithm, int cutoff = 64);

  int size() const { return n_; }
  DctAlgorithm algorithm() const { return algorithm_; }
  int cutoff() const { return cutoff_; }

  // In and out may not alias.
  void forward(const double* in, double* out) const;
  void inverse(const double* in, double* out) const;

 private:
  struct Level;
  const Level& level(int m) const;
  void forward_rec(const double* in, double* out, double* work, int m) const;
  void inverse_rec(const double* in, double* out, double* work, int m) const;
  void forward_iter(const double* in, double* out, double* work, int m) const;
  void inverse_iter(const double* in, double* out, double* work, int m) const;
  void forward_naive(const double* in, double* out, int m) const;
  void inverse_naive(const double* in, double* out, int m) const;
  int stop_length() const;

  int n_;
  DctAlgorithm algorithm_;
  int cutoff_;
  std::map<int, std::shared_ptr<const Level>> levels_;
};

std::vector<double> dct(const DctPlan& plan, const std::vector<double>& f);
std::vector<double> idct(const DctPlan& plan, const std::vector<double>& F);

// Square arrays stored row-major (a[row * N + col]); rows first, then columns.
std::vector<double> dct2d(const DctPlan& plan, const std::vector<double>& f);
std::vector<double> idct2d(const DctPlan& plan, const std::vector<double>& F);

}  // namespace stabflow
