#include "coadapt/num/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace coadapt::num {

MlpParams MlpParams::init(const std::vector<int>& dims, Act hidden, Act output, Rng& rng) {
  if (dims.size() < 2) throw std::invalid_argument("mlp: need at least input and output dims");
  MlpParams p;
  p.hidden = hidden;
  p.output = output;
  for (size_t k = 0; k + 1 < dims.size(); ++k) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(dims[k]));
    p.w.push_back(Tensor::uniform(dims[k], dims[k + 1], -bound, bound, rng));
    p.b.push_back(Tensor::uniform(1, dims[k + 1], -bound, bound, rng));
  }
  return p;
}

std::vector<Tensor*> MlpParams::tensors() {
  std::vector<Tensor*> out;
  for (size_t k = 0; k < w.size(); ++k) {
    out.push_back(&w[k]);
    out.push_back(&b[k]);
  }
  return out;
}

std::vector<const Tensor*> MlpParams::tensors() const {
  std::vector<const Tensor*> out;
  for (size_t k = 0; k < w.size(); ++k) {
    out.push_back(&w[k]);
    out.push_back(&b[k]);
  }
  return out;
}

BoundMlp bind(Tape& t, const MlpParams& p, bool trainable) {
  BoundMlp m;
  m.hidden = p.hidden;
  m.output = p.output;
  for (size_t k = 0; k < p.w.size(); ++k) {
    m.w.push_back(trainable ? t.input(p.w[k]) : t.constant(p.w[k]));
    m.b.push_back(trainable ? t.input(p.b[k]) : t.constant(p.b[k]));
  }
  return m;
}

namespace {
Var activate(Tape& t, Var x, Act a) {
  switch (a) {
    case Act::Relu: return t.relu(x);
    case Act::Tanh: return t.tanh(x);
    default: return x;
  }
}
}  // namespace

Var mlp_forward(Tape& t, const BoundMlp& m, Var x) {
  Var h = x;
  for (size_t k = 0; k < m.w.size(); ++k) {
    h = t.add(t.matmul(h, m.w[k]), m.b[k]);
    h = activate(t, h, k + 1 < m.w.size() ? m.hidden : m.output);
  }
  return h;
}

Tensor mlp_eval(const MlpParams& p, const Tensor& x) {
  Tape t;
  BoundMlp m = bind(t, p, false);
  return t.value(mlp_forward(t, m, t.constant(x)));
}

void soft_update(MlpParams& target, const MlpParams& online, double tau) {
  if (target.w.size() != online.w.size())
    throw std::invalid_argument("soft_update: layer counts differ");
  for (size_t k = 0; k < target.w.size(); ++k) {
    lerp_into(target.w[k], online.w[k], tau);
    lerp_into(target.b[k], online.b[k], tau);
  }
}

std::vector<const Tensor*> mlp_grads(Tape& t, const BoundMlp& m) {
  std::vector<const Tensor*> out;
  for (size_t k = 0; k < m.w.size(); ++k) {
    out.push_back(&t.grad(m.w[k]));
    out.push_back(&t.grad(m.b[k]));
  }
  return out;
}

}  // namespace coadapt::num
