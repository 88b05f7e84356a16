#include <cmath>
#include <initializer_list>
#include <utility>

#include "stabflow/integrators.hpp"

namespace stabflow {

namespace {

void check_finite(const State& y, int stage) {
  for (double v : y)
    if (!std::isfinite(v)) throw DivergedError(stage, "non-finite PIROCK stage");
}

// out = base + sum w_k v_k
void combine(State& out, const State& base, std::initializer_list<std::pair<double, const State*>> terms) {
  out = base;
  for (const auto& [w, v] : terms)
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * (*v)[k];
}

}  // namespace

StepResult pirock_step(const Rhs& fd, const Rhs& fa, const State& y, double t, double dt,
                       const Rock2Tableau& tab) {
  const int s = tab.s;
  if (s < 3) throw std::invalid_argument("PIROCK needs s >= 3");
  if (tab.degree < s) throw std::invalid_argument("PIROCK needs extended ROCK2 coefficients up to degree s");
  const std::size_t n = y.size();
  StepResult res;

  // Diffusion stages K_0..K_s with nodes c_j = P_j'(0).
  std::vector<State> K(s + 1, State(n));
  std::vector<double> c(s + 1, 0.0);
  K[0] = y;
  State f(n), fd_sm2(n);
  fd(t, K[0], f);
  ++res.f_evals;
  combine(K[1], K[0], {{dt * tab.mu[1], &f}});
  c[1] = tab.mu[1];
  check_finite(K[1], 2);
  for (int j = 2; j <= s; ++j) {
    fd(t + c[j - 1] * dt, K[j - 1], f);
    ++res.f_evals;
    if (j - 1 == s - 2) fd_sm2 = f;
    State& kj = K[j];
    for (std::size_t q = 0; q < n; ++q)
      kj[q] = dt * tab.mu[j] * f[q] - tab.nu[j] * K[j - 1][q] - tab.kappa[j] * K[j - 2][q];
    c[j] = tab.mu[j] - tab.nu[j] * c[j - 1] - tab.kappa[j] * c[j - 2];
    check_finite(kj, j + 1);
  }

  // ROCK2 finishing from K_{s-2}.
  const double sig = tab.sigma, tau = tab.tau;
  State ks1(n), ks(n), fd_ks1(n);
  combine(ks1, K[s - 2], {{sig * dt, &fd_sm2}});
  const double c_s1 = c[s - 2] + sig;
  fd(t + c_s1 * dt, ks1, fd_ks1);
  ++res.f_evals;
  combine(ks, ks1, {{sig * dt, &fd_ks1}});

  // Advection coupling from K = K_s.
  const State& Kx = K[s];
  const double cK = c[s];
  const double gamma = 1.0 - std::sqrt(2.0) / 2.0;
  const double beta = 1.0 - 2.0 * cK;
  State fa_K(n), fd_K(n), fa_4(n), fa_5(n), fd_3(n), k3(n), k4(n), k5(n);
  fa(t, Kx, fa_K);
  fd(t + cK * dt, Kx, fd_K);
  res.f_evals += 2;
  combine(k3, Kx, {{(1.0 - 2.0 * gamma) * dt, &fa_K}});
  combine(k4, Kx, {{dt / 3.0, &fa_K}});
  check_finite(k4, s + 4);
  fa(t + dt / 3.0, k4, fa_4);
  ++res.f_evals;
  combine(k5, Kx, {{2.0 / 3.0 * beta * dt, &fd_K}, {2.0 / 3.0 * dt, &fa_4}});
  check_finite(k5, s + 5);
  fa(t + 2.0 * dt / 3.0, k5, fa_5);
  fd(t + cK * dt, k3, fd_3);
  res.f_evals += 2;

  const double werr = sig * (1.0 - tau / (sig * sig)) * dt;
  const double wd = dt / (2.0 - 4.0 * gamma);
  res.y.resize(n);
  for (std::size_t q = 0; q < n; ++q)
    res.y[q] = ks[q] - werr * (fd_ks1[q] - fd_sm2[q]) + 0.25 * dt * fa_K[q] + 0.75 * dt * fa_5[q] +
               wd * (fd_3[q] - fd_K[q]);
  check_finite(res.y, s + 6);
  return res;
}

}  // namespace stabflow
