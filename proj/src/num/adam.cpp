#include "coadapt/num/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace coadapt::num {

void adam_step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads,
               AdamState& state, double learning_rate) {
  if (params.size() != grads.size() || params.size() != state.m.size())
    throw std::invalid_argument("adam_step: parameter/gradient/state sizes differ");
  state.step += 1;
  const double b1 = state.beta1, b2 = state.beta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (size_t k = 0; k < params.size(); ++k) {
    Tensor& p = *params[k];
    const Tensor& g = *grads[k];
    Tensor& m = state.m[k];
    Tensor& v = state.v[k];
    if (!p.same_shape(g) || !p.same_shape(m))
      throw std::invalid_argument("adam_step: shape mismatch");
    for (size_t i = 0; i < p.v.size(); ++i) {
      m.v[i] = b1 * m.v[i] + (1.0 - b1) * g.v[i];
      v.v[i] = b2 * v.v[i] + (1.0 - b2) * g.v[i] * g.v[i];
      const double mhat = m.v[i] / bc1;
      const double vhat = v.v[i] / bc2;
      p.v[i] -= learning_rate * mhat / (std::sqrt(vhat) + state.eps);
    }
  }
}

}  // namespace coadapt::num
