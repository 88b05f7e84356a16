#include <algorithm>
#include <cmath>
#include <limits>

#include "stabflow/integrators.hpp"

namespace stabflow {

DtProposal propose_dt(StepController& ctrl, double err_new, double dt_cur) {
  if (err_new < 0.0 || !std::isfinite(err_new)) err_new = std::numeric_limits<double>::infinity();
  DtProposal out;
  out.accept = err_new <= 1.0;
  const double expo = 1.0 / (ctrl.order_hat + 1);
  double fac;
  if (err_new == 0.0) {
    fac = ctrl.fac_max;
  } else if (std::isinf(err_new)) {
    fac = ctrl.fac_min;
  } else {
    fac = ctrl.safety * std::pow(1.0 / err_new, expo);
    if (ctrl.err_prev > 0.0 && ctrl.dt_prev > 0.0)
      fac *= std::pow(ctrl.err_prev / err_new, expo) * (dt_cur / ctrl.dt_prev);
  }
  // A rejected step never grows, nor does the step that follows it.
  if (!out.accept && std::isfinite(err_new)) fac = std::min(fac, ctrl.safety * std::pow(1.0 / err_new, expo));
  if (out.accept && ctrl.rejected_last) fac = std::min(fac, 1.0);
  fac = std::clamp(fac, ctrl.fac_min, ctrl.fac_max);
  out.dt_new = fac * dt_cur;
  if (out.accept) {
    ctrl.err_prev = std::max(err_new, 1e-10);
    ctrl.dt_prev = dt_cur;
  }
  ctrl.rejected_last = !out.accept;
  return out;
}

}  // namespace stabflow
