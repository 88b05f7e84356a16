#include "stabflow/problems.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace stabflow {

namespace {

constexpr double pi = std::numbers::pi;

Vec2 zero_vec(double, double, double) { return {}; }

// Forcing f = sin t * A + cos^2 t * B + cos t * E with time-free A, B, E.
struct ForcedBasis {
  Vec2 A, B, E;
};

ForcedBasis forced_basis(double x, double y, double nu) {
  const double sx = std::sin(pi * x), cx = std::cos(pi * x);
  const double sy = std::sin(pi * y), cy = std::cos(pi * y);
  const double S2x = std::sin(2 * pi * x), C2x = std::cos(2 * pi * x);
  const double S2y = std::sin(2 * pi * y), C2y = std::cos(2 * pi * y);
  const double pi2 = pi * pi, pi3 = pi2 * pi;
  ForcedBasis f;
  f.A.x = sx * sx * S2y + pi / 4 * sx * (2 + cy);
  f.B.x = pi * sx * sx * S2x * S2y * S2y - 2 * pi * S2x * sy * sy * sx * sx * C2y;
  f.E.x = -pi3 / 2 * sx * (1 + cy) - nu * (-2 * pi2 * S2y + 8 * pi2 * sx * sx * S2y);
  f.A.y = -S2x * sy * sy + pi / 4 * (2 + cx) * sy;
  f.B.y = -2 * pi * sx * sx * S2y * C2x * sy * sy + pi * S2x * S2x * sy * sy * S2y;
  f.E.y = -pi3 / 2 * sy * (1 + cx) - nu * (2 * pi2 * S2x - 8 * pi2 * S2x * sy * sy);
  return f;
}

// Basis sampled at the velocity unknowns of one grid, laid out like VelocityField.
struct SampledBasis {
  State A, B, E;
};

class ForcedFieldCache {
 public:
  explicit ForcedFieldCache(double nu) : nu_(nu) {}

  std::shared_ptr<const SampledBasis> get(const GridSpec& spec) {
    std::lock_guard lock(mtx_);
    auto it = cache_.find(spec.N);
    if (it != cache_.end()) return it->second;
    auto sb = std::make_shared<SampledBasis>();
    VelocityField a(spec.N), b(spec.N), e(spec.N);
    for (int j = 1; j <= spec.N; ++j)
      for (int i = 1; i < spec.N; ++i) {
        const auto f = forced_basis(spec.face_x(i), spec.center(j), nu_);
        a.u(i, j) = f.A.x;
        b.u(i, j) = f.B.x;
        e.u(i, j) = f.E.x;
      }
    for (int j = 1; j < spec.N; ++j)
      for (int i = 1; i <= spec.N; ++i) {
        const auto f = forced_basis(spec.center(i), spec.face_x(j), nu_);
        a.v(i, j) = f.A.y;
        b.v(i, j) = f.B.y;
        e.v(i, j) = f.E.y;
      }
    sb->A = std::move(a.data);
    sb->B = std::move(b.data);
    sb->E = std::move(e.data);
    cache_.emplace(spec.N, sb);
    return sb;
  }

 private:
  double nu_;
  std::mutex mtx_;
  std::map<int, std::shared_ptr<const SampledBasis>> cache_;
};

}  // namespace

ProblemSpec forced_flow(double re) {
  if (!(re > 0.0)) throw std::invalid_argument("Reynolds number must be positive");
  const double nu = 1.0 / re;
  ProblemSpec p;
  p.name = "forced";
  p.re = re;
  p.boundary.velocity = zero_vec;
  p.boundary.velocity_dt = zero_vec;
  p.boundary.tangential_normal_derivative = [](double t, double x, double y) {
    const double ct = std::cos(t);
    const double sx = std::sin(pi * x), sy = std::sin(pi * y);
    return Vec2{-ct * sx * sx * 2 * pi * std::cos(2 * pi * y), ct * 2 * pi * std::cos(2 * pi * x) * sy * sy};
  };
  ExactSolution ex;
  ex.velocity = [](double t, double x, double y) {
    const double ct = std::cos(t);
    const double sx = std::sin(pi * x), sy = std::sin(pi * y);
    return Vec2{-ct * sx * sx * std::sin(2 * pi * y), ct * std::sin(2 * pi * x) * sy * sy};
  };
  ex.pressure = [](double t, double x, double y) {
    const double cx = std::cos(pi * x), cy = std::cos(pi * y);
    return -std::sin(t) / 4 * (2 + cx) * (2 + cy) + pi * pi / 2 * std::cos(t) * (cx + cy + cx * cy);
  };
  p.initial = [v = ex.velocity](double, double x, double y) { return v(0.0, x, y); };
  p.exact = ex;
  p.forcing = [nu](double t, double x, double y) {
    const auto f = forced_basis(x, y, nu);
    const double st = std::sin(t), ct = std::cos(t);
    return Vec2{st * f.A.x + ct * ct * f.B.x + ct * f.E.x, st * f.A.y + ct * ct * f.B.y + ct * f.E.y};
  };
  auto cache = std::make_shared<ForcedFieldCache>(nu);
  p.forcing_field = [cache](double t, const GridSpec& spec, VelocityField& out) {
    const auto sb = cache->get(spec);
    const double st = std::sin(t), ct = std::cos(t), c2 = ct * ct;
    if (out.N != spec.N) out = VelocityField(spec.N);
    for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] = st * sb->A[k] + c2 * sb->B[k] + ct * sb->E[k];
  };
  return p;
}

ProblemSpec green_taylor(double re) {
  if (!(re > 0.0)) throw std::invalid_argument("Reynolds number must be positive");
  ProblemSpec p;
  p.name = "taylor";
  p.re = re;
  const double k = 2 * pi * pi / re;
  ExactSolution ex;
  ex.velocity = [k](double t, double x, double y) {
    const double e = std::exp(-k * t);
    return Vec2{-e * std::sin(pi * x) * std::cos(pi * y), e * std::cos(pi * x) * std::sin(pi * y)};
  };
  ex.pressure = [k](double t, double x, double y) {
    return 0.25 * std::exp(-2 * k * t) * (std::cos(2 * pi * x) + std::cos(2 * pi * y));
  };
  p.boundary.velocity = ex.velocity;
  p.boundary.velocity_dt = [k, v = ex.velocity](double t, double x, double y) {
    const Vec2 w = v(t, x, y);
    return Vec2{-k * w.x, -k * w.y};
  };
  p.boundary.tangential_normal_derivative = [k](double t, double x, double y) {
    const double g = std::exp(-k * t) * pi * std::sin(pi * x) * std::sin(pi * y);
    return Vec2{g, -g};
  };
  p.initial = [v = ex.velocity](double, double x, double y) { return v(0.0, x, y); };
  p.exact = ex;
  return p;
}

ProblemSpec lid_driven_cavity(double re) {
  if (!(re > 0.0)) throw std::invalid_argument("Reynolds number must be positive");
  ProblemSpec p;
  p.name = "cavity";
  p.re = re;
  p.boundary.velocity = [](double, double, double y) { return Vec2{y > 1.0 - 1e-12 ? 1.0 : 0.0, 0.0}; };
  p.boundary.velocity_dt = zero_vec;
  p.initial = zero_vec;
  return p;
}

ProblemSpec make_problem(const std::string& name, double re) {
  if (name == "forced") return forced_flow(re);
  if (name == "taylor") return green_taylor(re);
  if (name == "cavity") return lid_driven_cavity(re);
  throw std::invalid_argument("unknown problem '" + name + "' (expected forced, taylor or cavity)");
}

}  // namespace stabflow
