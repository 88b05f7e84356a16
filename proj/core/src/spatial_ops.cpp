#include "stabflow/spatial_ops.hpp"

#include <algorithm>
#include <stdexcept>

namespace stabflow {

CellField divergence(const VelocityField& vel, const BoundarySamples& b, const GridSpec& spec) {
  const int N = spec.N;
  const double inv = 1.0 / spec.dx;
  CellField d(N);
  for (int j = 1; j <= N; ++j) {
    for (int i = 1; i <= N; ++i) {
      const double ue = (i == N) ? b.u_right[j - 1] : vel.u(i, j);
      const double uw = (i == 1) ? b.u_left[j - 1] : vel.u(i - 1, j);
      const double vn = (j == N) ? b.v_top[i - 1] : vel.v(i, j);
      const double vs = (j == 1) ? b.v_bottom[i - 1] : vel.v(i, j - 1);
      d(i, j) = (ue - uw) * inv + (vn - vs) * inv;
    }
  }
  return d;
}

CellField divergence(const VelocityField& vel, const BoundaryData& bc, const GridSpec& spec, double t) {
  return divergence(vel, sample_boundary(bc.velocity, spec, t), spec);
}

VelocityField gradient_to_faces(const CellField& phi, const GridSpec& spec) {
  const int N = spec.N;
  const double inv = 1.0 / spec.dx;
  VelocityField g(N);
  for (int j = 1; j <= N; ++j)
    for (int i = 1; i < N; ++i) g.u(i, j) = (phi(i + 1, j) - phi(i, j)) * inv;
  for (int j = 1; j < N; ++j)
    for (int i = 1; i <= N; ++i) g.v(i, j) = (phi(i, j + 1) - phi(i, j)) * inv;
  return g;
}

CellField neumann_laplacian(const CellField& phi, const GridSpec& spec) {
  const int N = spec.N;
  const double inv2 = 1.0 / (spec.dx * spec.dx);
  CellField out(N);
  for (int j = 1; j <= N; ++j) {
    for (int i = 1; i <= N; ++i) {
      double s = 0.0;
      const double c = phi(i, j);
      if (i > 1) s += phi(i - 1, j) - c;
      if (i < N) s += phi(i + 1, j) - c;
      if (j > 1) s += phi(i, j - 1) - c;
      if (j < N) s += phi(i, j + 1) - c;
      out(i, j) = s * inv2;
    }
  }
  return out;
}

void momentum_rhs(const VelocityField& vel, const CellField* p, const BoundarySamples& b,
                  const BoundarySamples* wall_dn, const GridSpec& spec, double t,
                  const MomentumRhsConfig& cfg, VelocityField& out) {
  if (cfg.include_pressure && p == nullptr) throw std::invalid_argument("pressure required");
  if (cfg.wall == WallTreatment::exact_neumann && wall_dn == nullptr)
    throw std::invalid_argument("PM3 requires exact boundary derivatives");
  const int N = spec.N;
  const double h = spec.dx;
  const double inv_h = 1.0 / h;
  const double inv_h2 = inv_h * inv_h;
  const double nu = spec.nu;
  const bool ghost = cfg.wall == WallTreatment::exact_neumann;

  if (out.N != N) out = VelocityField(N);
  if (cfg.forcing_field) {
    cfg.forcing_field(t, spec, out);
  } else if (cfg.forcing) {
    for (int j = 1; j <= N; ++j)
      for (int i = 1; i < N; ++i) out.u(i, j) = cfg.forcing(t, spec.face_x(i), spec.center(j)).x;
    for (int j = 1; j < N; ++j)
      for (int i = 1; i <= N; ++i) out.v(i, j) = cfg.forcing(t, spec.center(i), spec.face_x(j)).y;
  } else {
    std::fill(out.data.begin(), out.data.end(), 0.0);
  }

  // u momentum
  for (int j = 1; j <= N; ++j) {
    for (int i = 1; i < N; ++i) {
      const double c = vel.u(i, j);
      const double w = (i == 1) ? b.u_left[j - 1] : vel.u(i - 1, j);
      const double e = (i == N - 1) ? b.u_right[j - 1] : vel.u(i + 1, j);
      double d2y, d1y;
      if (j == 1) {
        const double fw = b.u_bottom[i - 1];
        const double n1 = vel.u(i, 2), n2 = vel.u(i, 3);
        d1y = wall_first_derivative(fw, c, n1, h);
        if (ghost) {
          const double g = c - h * wall_dn->u_bottom[i - 1];
          d2y = (g - 2.0 * c + n1) * inv_h2;
        } else {
          d2y = wall_second_derivative(fw, c, n1, n2, h);
        }
      } else if (j == N) {
        const double fw = b.u_top[i - 1];
        const double n1 = vel.u(i, N - 1), n2 = vel.u(i, N - 2);
        d1y = -wall_first_derivative(fw, c, n1, h);
        if (ghost) {
          const double g = c + h * wall_dn->u_top[i - 1];
          d2y = (g - 2.0 * c + n1) * inv_h2;
        } else {
          d2y = wall_second_derivative(fw, c, n1, n2, h);
        }
      } else {
        const double s = vel.u(i, j - 1), n = vel.u(i, j + 1);
        d1y = 0.5 * (n - s) * inv_h;
        d2y = (s - 2.0 * c + n) * inv_h2;
      }
      double r = 0.0;
      if (cfg.include_diffusion) r += nu * ((w - 2.0 * c + e) * inv_h2 + d2y);
      if (cfg.include_advection) {
        const double vs_l = (j == 1) ? b.v_bottom[i - 1] : vel.v(i, j - 1);
        const double vs_r = (j == 1) ? b.v_bottom[i] : vel.v(i + 1, j - 1);
        const double vn_l = (j == N) ? b.v_top[i - 1] : vel.v(i, j);
        const double vn_r = (j == N) ? b.v_top[i] : vel.v(i + 1, j);
        const double vbar = 0.25 * (vs_l + vs_r + vn_l + vn_r);
        r -= c * 0.5 * (e - w) * inv_h + vbar * d1y;
      }
      if (cfg.include_pressure) r -= ((*p)(i + 1, j) - (*p)(i, j)) * inv_h;
      out.u(i, j) += r;
    }
  }

  // v momentum
  for (int j = 1; j < N; ++j) {
    for (int i = 1; i <= N; ++i) {
      const double c = vel.v(i, j);
      const double s = (j == 1) ? b.v_bottom[i - 1] : vel.v(i, j - 1);
      const double n = (j == N - 1) ? b.v_top[i - 1] : vel.v(i, j + 1);
      double d2x, d1x;
      if (i == 1) {
        const double fw = b.v_left[j - 1];
        const double e1 = vel.v(2, j), e2 = vel.v(3, j);
        d1x = wall_first_derivative(fw, c, e1, h);
        if (ghost) {
          const double g = c - h * wall_dn->v_left[j - 1];
          d2x = (g - 2.0 * c + e1) * inv_h2;
        } else {
          d2x = wall_second_derivative(fw, c, e1, e2, h);
        }
      } else if (i == N) {
        const double fw = b.v_right[j - 1];
        const double e1 = vel.v(N - 1, j), e2 = vel.v(N - 2, j);
        d1x = -wall_first_derivative(fw, c, e1, h);
        if (ghost) {
          const double g = c + h * wall_dn->v_right[j - 1];
          d2x = (g - 2.0 * c + e1) * inv_h2;
        } else {
          d2x = wall_second_derivative(fw, c, e1, e2, h);
        }
      } else {
        const double w = vel.v(i - 1, j), e = vel.v(i + 1, j);
        d1x = 0.5 * (e - w) * inv_h;
        d2x = (w - 2.0 * c + e) * inv_h2;
      }
      double r = 0.0;
      if (cfg.include_diffusion) r += nu * (d2x + (s - 2.0 * c + n) * inv_h2);
      if (cfg.include_advection) {
        const double uw_b = (i == 1) ? b.u_left[j - 1] : vel.u(i - 1, j);
        const double uw_t = (i == 1) ? b.u_left[j] : vel.u(i - 1, j + 1);
        const double ue_b = (i == N) ? b.u_right[j - 1] : vel.u(i, j);
        const double ue_t = (i == N) ? b.u_right[j] : vel.u(i, j + 1);
        const double ubar = 0.25 * (uw_b + uw_t + ue_b + ue_t);
        r -= ubar * d1x + c * 0.5 * (n - s) * inv_h;
      }
      if (cfg.include_pressure) r -= ((*p)(i, j + 1) - (*p)(i, j)) * inv_h;
      out.v(i, j) += r;
    }
  }
}

VelocityField momentum_rhs(const VelocityField& vel, const CellField* p, const BoundaryData& bc,
                           const GridSpec& spec, double t, const MomentumRhsConfig& cfg) {
  const auto b = sample_boundary(bc.velocity, spec, t);
  BoundarySamples dn;
  const BoundarySamples* dn_ptr = nullptr;
  if (cfg.wall == WallTreatment::exact_neumann) {
    if (!bc.tangential_normal_derivative)
      throw std::invalid_argument("PM3 requires exact boundary derivatives");
    dn = sample_boundary(bc.tangential_normal_derivative, spec, t);
    dn_ptr = &dn;
  }
  VelocityField out(spec.N);
  momentum_rhs(vel, p, b, dn_ptr, spec, t, cfg, out);
  return out;
}

double spectral_radius_estimate(const GridSpec& spec) {
  // Centred rows: 4 per direction. Wall rows: (16 + 25 + 10 + 1) / 5 normal to
  // the wall plus 4 along it. N >= 4 guarantees wall rows exist.
  const double centred = 8.0;
  const double wall = 52.0 / 5.0 + 4.0;
  return spec.nu * std::max(centred, wall) / (spec.dx * spec.dx);
}

}  // namespace stabflow
