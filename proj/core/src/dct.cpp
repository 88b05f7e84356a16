#include "stabflow/dct.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stabflow {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// cos(r * pi / (2m)) with r reduced modulo 4m to keep the argument small.
double half_angle_cos(long long r, int m) {
  const long long period = 4LL * m;
  r %= period;
  return std::cos(std::numbers::pi * static_cast<double>(r) / (2.0 * m));
}

}  // namespace

struct DctPlan::Level {
  int m = 0;
  // recursive split
  std::vector<double> rc, rs;  // cos, sin of k pi / (2m), k = 0..m/2
  // iterative forward, per k
  std::vector<double> fk_half_cos, fk_half_sin, fk_two_cos;
  // iterative inverse, per n < m/2
  std::vector<double> in_sin, in_half_sin, in_two_cos;
};

DctPlan::DctPlan(int n, DctAlgorithm algorithm, int cutoff)
    : n_(n), algorithm_(algorithm), cutoff_(cutoff) {
  if (n < 1) throw std::invalid_argument("DCT length must be positive");
  switch (algorithm) {
    case DctAlgorithm::naive:
      break;
    case DctAlgorithm::iterative:
      if (n % 2 != 0) throw std::invalid_argument("iterative DCT needs even N, got " + std::to_string(n));
      break;
    case DctAlgorithm::recursive:
    case DctAlgorithm::hybrid:
      if (!is_power_of_two(n) || n < 2)
        throw std::invalid_argument("recursive DCT needs N a power of two, got " + std::to_string(n));
      if (algorithm == DctAlgorithm::hybrid && (cutoff < 2 || cutoff % 2 != 0))
        throw std::invalid_argument("hybrid cutoff must be even and >= 2");
      break;
  }

  auto build = [](int m) {
    auto lv = std::make_shared<Level>();
    lv->m = m;
    const double pi = std::numbers::pi;
    const int h = m / 2;
    lv->rc.resize(h + 1);
    lv->rs.resize(h + 1);
    for (int k = 0; k <= h; ++k) {
      lv->rc[k] = std::cos(k * pi / (2.0 * m));
      lv->rs[k] = std::sin(k * pi / (2.0 * m));
    }
    lv->fk_half_cos.resize(m);
    lv->fk_half_sin.resize(m);
    lv->fk_two_cos.resize(m);
    for (int k = 0; k < m; ++k) {
      const double theta = k * pi / m;
      lv->fk_half_cos[k] = std::cos(0.5 * theta);
      lv->fk_half_sin[k] = std::sin(0.5 * theta);
      lv->fk_two_cos[k] = 2.0 * std::cos(theta);
    }
    lv->in_sin.resize(h);
    lv->in_half_sin.resize(h);
    lv->in_two_cos.resize(h);
    for (int q = 0; q < h; ++q) {
      const double theta = (2 * q + 1) * pi / m;
      lv->in_sin[q] = std::sin(theta);
      lv->in_half_sin[q] = std::sin(0.5 * theta);
      lv->in_two_cos[q] = 2.0 * std::cos(theta);
    }
    return lv;
  };

  if (algorithm != DctAlgorithm::naive) {
    for (int m = n; m >= 2; m /= 2) {
      levels_[m] = build(m);
      if (algorithm == DctAlgorithm::iterative || m <= stop_length()) break;
    }
  }
}

int DctPlan::stop_length() const {
  switch (algorithm_) {
    case DctAlgorithm::recursive: return 2;
    case DctAlgorithm::hybrid: return cutoff_;
    default: return n_;
  }
}

const DctPlan::Level& DctPlan::level(int m) const { return *levels_.at(m); }

void DctPlan::forward_naive(const double* in, double* out, int m) const {
  for (int k = 0; k < m; ++k) {
    double s = 0.0;
    for (int q = 0; q < m; ++q) s += in[q] * half_angle_cos(static_cast<long long>(2 * q + 1) * k, m);
    out[k] = s;
  }
}

void DctPlan::inverse_naive(const double* in, double* out, int m) const {
  for (int q = 0; q < m; ++q) {
    double s = 0.5 * in[0];
    for (int k = 1; k < m; ++k) s += in[k] * half_angle_cos(static_cast<long long>(2 * q + 1) * k, m);
    out[q] = 2.0 * s / m;
  }
}

void DctPlan::forward_iter(const double* in, double* out, double* work, int m) const {
  const Level& lv = level(m);
  const int h = m / 2;
  double* wp = work;      // f_n + f_{m-1-n}
  double* wm = work + h;  // f_n - f_{m-1-n}
  for (int q = 0; q < h; ++q) {
    wp[q] = in[q] + in[m - 1 - q];
    wm[q] = in[q] - in[m - 1 - q];
  }
  for (int k = 0; k < m; ++k) {
    const double c2 = lv.fk_two_cos[k];
    double g1 = 0.0, g2 = 0.0;
    if (k % 2 == 0) {
      const double a = lv.fk_half_cos[k];
      double prev = 0.0;
      for (int j = 0; j < h; ++j) {
        const double g = a * (wp[j] - prev) + c2 * g1 - g2;
        prev = wp[j];
        g2 = g1;
        g1 = g;
      }
      out[k] = ((k / 2) % 2 == 0) ? g1 : -g1;
    } else {
      const double a = lv.fk_half_sin[k];
      double prev = 0.0;
      for (int j = 0; j < h; ++j) {
        const double g = a * (wm[j] + prev) + c2 * g1 - g2;
        prev = wm[j];
        g2 = g1;
        g1 = g;
      }
      out[k] = (((k - 1) / 2) % 2 == 0) ? g1 : -g1;
    }
  }
}

void DctPlan::inverse_iter(const double* in, double* out, double* /*work*/, int m) const {
  const Level& lv = level(m);
  const int h = m / 2;
  const double scale = 2.0 / m;
  for (int q = 0; q < h; ++q) {
    const double c2 = lv.in_two_cos[q];
    const double sn = lv.in_sin[q];
    const double sh = lv.in_half_sin[q];
    double p1 = 0.0, p2 = 0.0, q1 = 0.0, q2 = 0.0;
    double odd_prev = 0.0;
    for (int j = 0; j < h; ++j) {
      const double even = (j == 0) ? 0.5 * in[0] : in[2 * j];
      const double odd = in[2 * j + 1];
      const double p = sn * even + c2 * p1 - p2;
      const double qq = sh * (odd + odd_prev) + c2 * q1 - q2;
      odd_prev = odd;
      p2 = p1;
      p1 = p;
      q2 = q1;
      q1 = qq;
    }
    const double sign = (q % 2 == 0) ? scale : -scale;
    out[q] = sign * (p1 + q1);
    out[m - 1 - q] = sign * (p1 - q1);
  }
}

void DctPlan::forward_rec(const double* in, double* out, double* work, int m) const {
  if (m == 2) {
    out[0] = in[0] + in[1];
    out[1] = (in[0] - in[1]) * std::numbers::sqrt2 / 2.0;
    return;
  }
  if (algorithm_ == DctAlgorithm::hybrid && m <= cutoff_) {
    forward_iter(in, out, work, m);
    return;
  }
  const Level& lv = level(m);
  const int h = m / 2;
  double* fl = work;
  double* fh = work + h;
  double* a = work + m;
  double* b = work + m + h;
  for (int q = 0; q < h; ++q) {
    fl[q] = in[2 * q] + in[2 * q + 1];
    const double d = in[2 * q] - in[2 * q + 1];
    fh[q] = (q % 2 == 0) ? d : -d;
  }
  forward_rec(fl, a, work + 2 * m, h);
  forward_rec(fh, b, work + 2 * m, h);
  out[0] = a[0];
  out[h] = b[0] / std::numbers::sqrt2;
  for (int k = 1; k < h; ++k) {
    out[k] = lv.rc[k] * a[k] + lv.rs[k] * b[h - k];
    out[m - k] = -lv.rs[k] * a[k] + lv.rc[k] * b[h - k];
  }
}

void DctPlan::inverse_rec(const double* in, double* out, double* work, int m) const {
  if (m == 2) {
    const double a = 0.5 * in[0];
    const double b = in[1] * std::numbers::sqrt2 / 2.0;
    out[0] = a + b;
    out[1] = a - b;
    return;
  }
  if (algorithm_ == DctAlgorithm::hybrid && m <= cutoff_) {
    inverse_iter(in, out, work, m);
    return;
  }
  const Level& lv = level(m);
  const int h = m / 2;
  double* w = work;
  double* v = work + h;
  double* c = work + m;
  double* d = work + m + h;
  const double r = std::numbers::sqrt2 / 2.0;
  w[0] = in[0];
  v[0] = std::numbers::sqrt2 * in[h];
  for (int k = 1; k < h; ++k) {
    w[k] = lv.rc[k] * in[k] - lv.rs[k] * in[m - k];
    v[k] = r * (lv.rc[k] * (in[h + k] + in[h - k]) + lv.rs[k] * (in[h + k] - in[h - k]));
  }
  inverse_rec(w, c, work + 2 * m, h);
  inverse_rec(v, d, work + 2 * m, h);
  for (int q = 0; q < h; ++q) {
    const double sd = (q % 2 == 0) ? d[q] : -d[q];
    out[2 * q] = 0.5 * (c[q] + sd);
    out[2 * q + 1] = 0.5 * (c[q] - sd);
  }
}

void DctPlan::forward(const double* in, double* out) const {
  switch (algorithm_) {
    case DctAlgorithm::naive:
      forward_naive(in, out, n_);
      return;
    case DctAlgorithm::iterative: {
      std::vector<double> work(n_);
      forward_iter(in, out, work.data(), n_);
      return;
    }
    default: {
      std::vector<double> work(4 * n_ + 4);
      forward_rec(in, out, work.data(), n_);
      return;
    }
  }
}

void DctPlan::inverse(const double* in, double* out) const {
  switch (algorithm_) {
    case DctAlgorithm::naive:
      inverse_naive(in, out, n_);
      return;
    case DctAlgorithm::iterative:
      inverse_iter(in, out, nullptr, n_);
      return;
    default: {
      std::vector<double> work(4 * n_ + 4);
      inverse_rec(in, out, work.data(), n_);
      return;
    }
  }
}

std::vector<double> dct(const DctPlan& plan, const std::vector<double>& f) {
  if (static_cast<int>(f.size()) != plan.size()) throw std::invalid_argument("DCT length mismatch");
  std::vector<double> out(f.size());
  plan.forward(f.data(), out.data());
  return out;
}

std::vector<double> idct(const DctPlan& plan, const std::vector<double>& F) {
  if (static_cast<int>(F.size()) != plan.size()) throw std::invalid_argument("DCT length mismatch");
  std::vector<double> out(F.size());
  plan.inverse(F.data(), out.data());
  return out;
}

namespace {

template <class Transform>
std::vector<double> apply_2d(const DctPlan& plan, const std::vector<double>& a, Transform tr) {
  const int n = plan.size();
  if (a.size() != static_cast<std::size_t>(n) * n) throw std::invalid_argument("2D DCT needs a square N x N array");
  std::vector<double> tmp(a.size());
  for (int r = 0; r < n; ++r) tr(a.data() + static_cast<std::size_t>(r) * n, tmp.data() + static_cast<std::size_t>(r) * n);
  std::vector<double> col(n), res(n), out(a.size());
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) col[r] = tmp[static_cast<std::size_t>(r) * n + c];
    tr(col.data(), res.data());
    for (int r = 0; r < n; ++r) out[static_cast<std::size_t>(r) * n + c] = res[r];
  }
  return out;
}

}  // namespace

std::vector<double> dct2d(const DctPlan& plan, const std::vector<double>& f) {
  return apply_2d(plan, f, [&](const double* in, double* out) { plan.forward(in, out); });
}

std::vector<double> idct2d(const DctPlan& plan, const std::vector<double>& F) {
  return apply_2d(plan, F, [&](const double* in, double* out) { plan.inverse(in, out); });
}

}  // namespace stabflow
