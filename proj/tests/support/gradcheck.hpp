#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "coadapt/num/tensor.hpp"

namespace testsupport {

// Central finite-difference check of every element of every parameter
// tensor against analytic gradients. `eval` must recompute the scalar loss
// from the current parameter values; `grads` are the analytic gradients in
// the same order as `params`.
struct GradCheckResult {
  bool ok = true;
  double worst_rel = 0.0;
  std::string where;
};

inline GradCheckResult check_gradients(const std::function<double()>& eval,
                                       const std::vector<coadapt::num::Tensor*>& params,
                                       const std::vector<const coadapt::num::Tensor*>& grads,
                                       double h = 1e-5, double rel_tol = 1e-4,
                                       double abs_floor = 1e-6) {
  GradCheckResult r;
  for (size_t k = 0; k < params.size(); ++k) {
    coadapt::num::Tensor& p = *params[k];
    for (size_t i = 0; i < p.v.size(); ++i) {
      const double saved = p.v[i];
      p.v[i] = saved + h;
      const double fp = eval();
      p.v[i] = saved - h;
      const double fm = eval();
      p.v[i] = saved;
      const double fd = (fp - fm) / (2.0 * h);
      const double an = grads[k]->v[i];
      const double err = std::abs(an - fd);
      const double scale = std::max({std::abs(an), std::abs(fd), abs_floor / rel_tol});
      const double rel = err / scale;
      if (rel > r.worst_rel) {
        r.worst_rel = rel;
        r.where = "param " + std::to_string(k) + " elem " + std::to_string(i);
      }
      if (err > abs_floor && rel > rel_tol) r.ok = false;
    }
  }
  return r;
}

}  // namespace testsupport
