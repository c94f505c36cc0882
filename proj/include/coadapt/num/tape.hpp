#pragma once

#include <functional>
#include <string>
#include <vector>

#include "coadapt/num/tensor.hpp"

namespace coadapt::num {

// Handle to a tensor recorded on a Tape.
struct Var {
  int idx = -1;
  bool valid() const { return idx >= 0; }
};

// Reverse-mode automatic differentiation over dense matrices.
//
// Operations append nodes in forward (topological) order; backward() walks
// the record in exact reverse order. A tape is single-threaded and is meant
// to be built, differentiated and discarded per training step; parameters
// live outside the tape and are re-registered via input().
//
// Broadcasting in binary elementwise ops is limited to what the networks
// need: same shape, row vector (1xC), column vector (Rx1), or scalar (1x1)
// on the right-hand side.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaves.
  Var input(const Tensor& t);     // differentiable
  Var constant(const Tensor& t);  // gradient is never propagated

  // Binary.
  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var minimum(Var a, Var b);  // elementwise; same shape only

  // Unary / shape.
  Var scale(Var a, double s);
  Var add_scalar(Var a, double s);
  Var tanh(Var a);
  Var relu(Var a);
  Var exp(Var a);
  Var log(Var a);
  Var clamp(Var a, double lo, double hi);  // pass-through gradient inside (lo, hi)
  Var detach(Var a);                       // stop-gradient
  Var reshape(Var a, int rows, int cols);
  Var slice_cols(Var a, int c0, int c1);  // columns [c0, c1)

  // Reductions.
  Var row_sum(Var a);   // RxC -> Rx1
  Var row_mean(Var a);  // RxC -> Rx1
  Var col_sum(Var a);   // RxC -> 1xC
  Var col_mean(Var a);  // RxC -> 1xC
  Var sum_all(Var a);   // RxC -> 1x1
  Var mean_all(Var a);  // RxC -> 1x1

  // Structure.
  Var concat_cols(const std::vector<Var>& parts);  // equal rows
  Var concat_rows(const std::vector<Var>& parts);  // equal cols
  Var gather_rows(Var a, std::vector<int> idx);
  Var scatter_add_rows(Var a, std::vector<int> idx, int out_rows);

  // Runs reverse accumulation from a scalar loss. Gradients of leaves that
  // do not influence the loss stay exactly zero.
  void backward(Var loss);

  const Tensor& value(Var v) const { return nodes_[v.idx].value; }
  const Tensor& grad(Var v) { return grad_buf(v.idx); }  // zeros if untouched

  int size() const { return static_cast<int>(nodes_.size()); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;           // allocated lazily; empty means all-zero
    bool needs_grad = false;
    std::function<void(Tape&)> back;  // empty for leaves
  };

  Var push(Tensor value, bool needs_grad, std::function<void(Tape&)> back);
  Tensor& grad_buf(int idx);  // allocates zeros on first touch
  bool wants(int idx) const { return nodes_[idx].needs_grad; }

  friend struct TapeOps;
  std::vector<Node> nodes_;
};

}  // namespace coadapt::num
