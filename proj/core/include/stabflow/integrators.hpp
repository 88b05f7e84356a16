// Stabilised explicit Runge-Kutta integrators (RKC, ROCK2, PIROCK) and RK4.
//
// RKC and ROCK2 share one stage engine. Every stage has the form
//
//   g_j = y0 + alpha_j (B_{j-1} - y0) + beta_j (B_{j-2} - y0) + dt sum_l gamma_jl F_l
//
// where B are the recursion buffers and F_l = f(U_l). A StageHook decides what
// the buffers hold: the raw stage (none), the projected stage (project_state)
// or the raw stage while F is taken at the projected one (project_dual_buffer).
#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabflow/grid.hpp"

namespace stabflow {

using Rhs = std::function<void(double t, const State& y, State& dydt)>;

class DivergedError : public std::runtime_error {
 public:
  DivergedError(int stage, const std::string& what)
      : std::runtime_error("diverged at stage " + std::to_string(stage) + ": " + what), stage_(stage) {}
  int stage() const { return stage_; }

 private:
  int stage_;
};

enum class Method { rkc, rock2, pirock, rk4 };
enum class HookMode { none, project_state, project_dual_buffer };

struct StageHook {
  HookMode mode = HookMode::none;
  // (Butcher stage index i >= 2, node c_i, stage time, raw stage, projected stage out)
  std::function<void(int i, double c, double t, const State& raw, State& projected)> callback;
};

struct RkcTableau {
  int s = 0;
  double eps = 0.0;
  double w0 = 0.0, w1 = 0.0;
  // Indexed 0..s; mu/nu/kappa entries below their first use are zero.
  std::vector<double> T, dT, ddT;
  std::vector<double> a, b, mu, nu, kappa;
  std::vector<double> c;  // c[0] unused, c_1..c_{s+1}
};

RkcTableau rkc_tableau(int s, double eps = 0.15);

struct Rock2Tableau {
  int s = 0;
  int degree = 0;  // number of recursion coefficients stored (>= s - 2)
  // mu[j], nu[j], kappa[j] for j = 1..degree (nu[1], kappa[1] unused)
  std::vector<double> mu, nu, kappa;
  double sigma = 0.0, tau = 0.0;
  std::vector<double> c;  // c_1..c_{s+1}
};

class Rock2Table {
 public:
  static Rock2Table load(const std::string& path);
  // Environment variable STABFLOW_ROCK2_TABLE, then the installed and source copies.
  static const Rock2Table& default_table();
  static std::string default_path();
  // Loads once per path and keeps the table for the process lifetime.
  static const Rock2Table& cached(const std::string& path);

  const Rock2Tableau& get(int s) const;
  bool has(int s) const { return entries_.count(s) != 0; }
  std::vector<int> degrees() const;
  int min_degree() const { return entries_.begin()->first; }
  int max_degree() const { return entries_.rbegin()->first; }

 private:
  std::map<int, Rock2Tableau> entries_;
};

// Butcher form of a recursive method: a is (s+1) x (s+1), row i is stage U_{i+1};
// the last row holds the weights b.
struct ButcherForm {
  int stages = 0;  // s + 1 rows, stage U_1 .. U_{s+1}
  std::vector<std::vector<double>> a;
  std::vector<double> b() const { return a.back(); }
  std::vector<double> c() const;
};

ButcherForm butcher_form(const RkcTableau& tab);
ButcherForm butcher_form(const Rock2Tableau& tab);

// c_1..c_{s+1} from running the recursion on y' = 1, y0 = 0, dt = 1.
std::vector<double> nodes_c(Method method, int s, const Rock2Table* table = nullptr, double eps = 0.15);

struct StepResult {
  State y;
  double err = 0.0;
  int f_evals = 0;
};

struct ErrorScale {
  double atol = 1.0;
  double rtol = 0.0;
  bool estimate = true;  // RKC spends one extra f evaluation on the estimate
};

StepResult rkc_step(const Rhs& f, const State& y, double t, double dt, const RkcTableau& tab,
                    const StageHook& hook = {}, ErrorScale scale = {});
StepResult rock2_step(const Rhs& f, const State& y, double t, double dt, const Rock2Tableau& tab,
                      const StageHook& hook = {}, ErrorScale scale = {});

// Diffusion part F_D handled by the Chebyshev stages, F_A by the explicit
// coupling stages. Requires the table to carry degree >= s.
StepResult pirock_step(const Rhs& fd, const Rhs& fa, const State& y, double t, double dt,
                       const Rock2Tableau& tab);

// Classical RK4. In project_dual_buffer mode every stage and the result are
// passed through the hook with nodes (1/2, 1/2, 1, 1).
StepResult rk4_step(const Rhs& f, const State& y, double t, double dt, const StageHook& hook = {});

// Kahan-compensated accumulation of y_{n+1} = y_n + increment.
class CompensatedState {
 public:
  explicit CompensatedState(State y0) : y_(std::move(y0)), comp_(y_.size(), 0.0) {}
  void add(const State& increment);
  const State& value() const { return y_; }
  void reset(State y) {
    y_ = std::move(y);
    comp_.assign(y_.size(), 0.0);
  }

 private:
  State y_;
  State comp_;
};

// Stability polynomial R_s(z) from one scalar step on y' = z y with dt = 1.
double stability_poly_eval(Method method, int s, double z, const Rock2Table* table = nullptr,
                           double eps = 0.15);

// Smallest admissible s with dt * rho <= l_s, l_s = 0.653 s^2 (RKC), 0.811 s^2 (ROCK2).
int select_stages(double dt, double rho, Method method, int min_stages = 0, int cap = 200,
                  const Rock2Table* table = nullptr);
double stability_length(Method method, int s);

struct StepController {
  double atol = 1e-3;
  double rtol = 1e-3;
  double err_prev = -1.0;  // negative until the first accepted step
  double dt_prev = 0.0;
  double safety = 0.8;
  double fac_min = 0.1;
  double fac_max = 10.0;
  int order_hat = 1;
  bool rejected_last = false;
};

struct DtProposal {
  double dt_new = 0.0;
  bool accept = false;
};

// Proposes the next step size; on acceptance the controller memory is updated.
DtProposal propose_dt(StepController& ctrl, double err_new, double dt_cur);

}  // namespace stabflow
