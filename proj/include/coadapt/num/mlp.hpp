#pragma once

#include <vector>

#include "coadapt/num/rng.hpp"
#include "coadapt/num/tape.hpp"
#include "coadapt/num/tensor.hpp"

namespace coadapt::num {

enum class Act { Linear, Relu, Tanh };

// Plain fully connected network parameters. Forward passes are recorded on a
// caller-provided tape so the same weights can appear as trainable inputs or
// frozen constants.
struct MlpParams {
  std::vector<Tensor> w;  // layer k: (dims[k] x dims[k+1])
  std::vector<Tensor> b;  // (1 x dims[k+1])
  Act hidden = Act::Relu;
  Act output = Act::Linear;

  static MlpParams init(const std::vector<int>& dims, Act hidden, Act output, Rng& rng);

  std::vector<Tensor*> tensors();
  std::vector<const Tensor*> tensors() const;
  int in_dim() const { return w.front().rows; }
  int out_dim() const { return w.back().cols; }
};

// Weights of one network registered on a tape.
struct BoundMlp {
  std::vector<Var> w, b;
  Act hidden = Act::Relu;
  Act output = Act::Linear;
};

BoundMlp bind(Tape& t, const MlpParams& p, bool trainable);
Var mlp_forward(Tape& t, const BoundMlp& m, Var x);

// Convenience: plain forward pass without gradient bookkeeping.
Tensor mlp_eval(const MlpParams& p, const Tensor& x);

// target <- (1 - tau) * target + tau * online, elementwise over all tensors.
void soft_update(MlpParams& target, const MlpParams& online, double tau);

// Gradients of all bound tensors of `m`, in tensors() order.
std::vector<const Tensor*> mlp_grads(Tape& t, const BoundMlp& m);

}  // namespace coadapt::num
