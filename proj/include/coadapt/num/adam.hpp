#pragma once

#include <cstdint>
#include <vector>

#include "coadapt/num/tensor.hpp"

namespace coadapt::num {

// Adam optimizer state for a fixed list of parameter tensors.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::int64_t step = 0;
  std::vector<Tensor> m;  // first moments, one per parameter tensor
  std::vector<Tensor> v;  // second moments

  static AdamState like(const std::vector<Tensor*>& params) {
    AdamState s;
    s.m.reserve(params.size());
    s.v.reserve(params.size());
    for (const Tensor* p : params) {
      s.m.emplace_back(p->rows, p->cols);
      s.v.emplace_back(p->rows, p->cols);
    }
    return s;
  }
};

// Standard Adam update with bias correction, in place. Deterministic.
void adam_step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads,
               AdamState& state, double learning_rate);

}  // namespace coadapt::num
