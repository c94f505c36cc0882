#include "coadapt/num/tape.hpp"

#include <algorithm>
#include <stdexcept>

namespace coadapt::num {

namespace {

enum class Bcast { Full, Row, Col, Scalar };

Bcast broadcast_kind(const Tensor& a, const Tensor& b, const char* what) {
  if (a.same_shape(b)) return Bcast::Full;
  if (b.rows == 1 && b.cols == 1) return Bcast::Scalar;
  if (b.rows == 1 && b.cols == a.cols) return Bcast::Row;
  if (b.cols == 1 && b.rows == a.rows) return Bcast::Col;
  throw std::invalid_argument(std::string(what) + ": shapes do not conform");
}

double bval(const Tensor& b, Bcast k, int i, int j) {
  switch (k) {
    case Bcast::Full: return b.at(i, j);
    case Bcast::Row: return b.at(0, j);
    case Bcast::Col: return b.at(i, 0);
    default: return b.v[0];
  }
}

double& bref(Tensor& b, Bcast k, int i, int j) {
  switch (k) {
    case Bcast::Full: return b.at(i, j);
    case Bcast::Row: return b.at(0, j);
    case Bcast::Col: return b.at(i, 0);
    default: return b.v[0];
  }
}

}  // namespace

Var Tape::push(Tensor value, bool needs_grad, std::function<void(Tape&)> back) {
  Node n;
  n.value = std::move(value);
  n.needs_grad = needs_grad;
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Tensor& Tape::grad_buf(int idx) {
  Node& n = nodes_[idx];
  if (n.grad.size() == 0) n.grad = Tensor::zeros(n.value.rows, n.value.cols);
  return n.grad;
}

Var Tape::input(const Tensor& t) { return push(t, true, nullptr); }

Var Tape::constant(const Tensor& t) { return push(t, false, nullptr); }

Var Tape::matmul(Var a, Var b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  if (A.cols != B.rows) throw std::invalid_argument("matmul: inner dimensions differ");
  Tensor C(A.rows, B.cols);
  matmul_acc(A, B, C);
  const bool ng = wants(a.idx) || wants(b.idx);
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    const int ai = a.idx, bi = b.idx, oi = out.idx;
    nodes_[oi].back = [ai, bi, oi](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      if (t.wants(ai)) matmul_acc(dC, transpose(t.nodes_[bi].value), t.grad_buf(ai));
      if (t.wants(bi)) matmul_acc(transpose(t.nodes_[ai].value), dC, t.grad_buf(bi));
    };
  }
  return out;
}

Var Tape::add(Var a, Var b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  const Bcast k = broadcast_kind(A, B, "add");
  Tensor C(A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j) + bval(B, k, i, j);
  const bool ng = wants(a.idx) || wants(b.idx);
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    const int ai = a.idx, bi = b.idx, oi = out.idx;
    nodes_[oi].back = [ai, bi, oi, k](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      if (t.wants(ai)) {
        Tensor& dA = t.grad_buf(ai);
        for (size_t x = 0; x < dA.v.size(); ++x) dA.v[x] += dC.v[x];
      }
      if (t.wants(bi)) {
        Tensor& dB = t.grad_buf(bi);
        for (int i = 0; i < dC.rows; ++i)
          for (int j = 0; j < dC.cols; ++j) bref(dB, k, i, j) += dC.at(i, j);
      }
    };
  }
  return out;
}

Var Tape::sub(Var a, Var b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  const Bcast k = broadcast_kind(A, B, "sub");
  Tensor C(A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j) - bval(B, k, i, j);
  const bool ng = wants(a.idx) || wants(b.idx);
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    const int ai = a.idx, bi = b.idx, oi = out.idx;
    nodes_[oi].back = [ai, bi, oi, k](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      if (t.wants(ai)) {
        Tensor& dA = t.grad_buf(ai);
        for (size_t x = 0; x < dA.v.size(); ++x) dA.v[x] += dC.v[x];
      }
      if (t.wants(bi)) {
        Tensor& dB = t.grad_buf(bi);
        for (int i = 0; i < dC.rows; ++i)
          for (int j = 0; j < dC.cols; ++j) bref(dB, k, i, j) -= dC.at(i, j);
      }
    };
  }
  return out;
}

Var Tape::mul(Var a, Var b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  const Bcast k = broadcast_kind(A, B, "mul");
  Tensor C(A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j) * bval(B, k, i, j);
  const bool ng = wants(a.idx) || wants(b.idx);
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    const int ai = a.idx, bi = b.idx, oi = out.idx;
    nodes_[oi].back = [ai, bi, oi, k](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      const Tensor& A2 = t.nodes_[ai].value;
      const Tensor& B2 = t.nodes_[bi].value;
      if (t.wants(ai)) {
        Tensor& dA = t.grad_buf(ai);
        for (int i = 0; i < dC.rows; ++i)
          for (int j = 0; j < dC.cols; ++j) dA.at(i, j) += dC.at(i, j) * bval(B2, k, i, j);
      }
      if (t.wants(bi)) {
        Tensor& dB = t.grad_buf(bi);
        for (int i = 0; i < dC.rows; ++i)
          for (int j = 0; j < dC.cols; ++j) bref(dB, k, i, j) += dC.at(i, j) * A2.at(i, j);
      }
    };
  }
  return out;
}

Var Tape::minimum(Var a, Var b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  if (!A.same_shape(B)) throw std::invalid_argument("minimum: shapes differ");
  Tensor C(A.rows, A.cols);
  for (size_t x = 0; x < A.v.size(); ++x) C.v[x] = std::min(A.v[x], B.v[x]);
  const bool ng = wants(a.idx) || wants(b.idx);
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    const int ai = a.idx, bi = b.idx, oi = out.idx;
    nodes_[oi].back = [ai, bi, oi](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      const Tensor& A2 = t.nodes_[ai].value;
      const Tensor& B2 = t.nodes_[bi].value;
      const bool wa = t.wants(ai), wb = t.wants(bi);
      Tensor* dA = wa ? &t.grad_buf(ai) : nullptr;
      Tensor* dB = wb ? &t.grad_buf(bi) : nullptr;
      for (size_t x = 0; x < dC.v.size(); ++x) {
        if (A2.v[x] <= B2.v[x]) {
          if (wa) dA->v[x] += dC.v[x];
        } else if (wb) {
          dB->v[x] += dC.v[x];
        }
      }
    };
  }
  return out;
}

namespace {
// Shared scaffolding for elementwise unary ops: dx = dy * dydx(x, y).
}  // namespace

Var Tape::scale(Var a, double s) {
  const Tensor& A = value(a);
  Tensor C(A.rows, A.cols);
  for (size_t x = 0; x < A.v.size(); ++x) C.v[x] = A.v[x] * s;
  const bool ng = wants(a.idx);
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi, s](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      Tensor& dA = t.grad_buf(ai);
      for (size_t x = 0; x < dC.v.size(); ++x) dA.v[x] += dC.v[x] * s;
    };
  }
  return out;
}

Var Tape::add_scalar(Var a, double s) {
  const Tensor& A = value(a);
  Tensor C(A.rows, A.cols);
  for (size_t x = 0; x < A.v.size(); ++x) C.v[x] = A.v[x] + s;
  const bool ng = wants(a.idx);
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      Tensor& dA = t.grad_buf(ai);
      for (size_t x = 0; x < dC.v.size(); ++x) dA.v[x] += dC.v[x];
    };
  }
  return out;
}

Var Tape::tanh(Var a) {
  const Tensor& A = value(a);
  Tensor C(A.rows, A.cols);
  for (size_t x = 0; x < A.v.size(); ++x) C.v[x] = std::tanh(A.v[x]);
  const bool ng = wants(a.idx);
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      const Tensor& Y = t.nodes_[oi].value;
      Tensor& dA = t.grad_buf(ai);
      for (size_t x = 0; x < dC.v.size(); ++x) dA.v[x] += dC.v[x] * (1.0 - Y.v[x] * Y.v[x]);
    };
  }
  return out;
}

Var Tape::relu(Var a) {
  const Tensor& A = value(a);
  Tensor C(A.rows, A.cols);
  for (size_t x = 0; x < A.v.size(); ++x) C.v[x] = A.v[x] > 0.0 ? A.v[x] : 0.0;
  const bool ng = wants(a.idx);
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      const Tensor& X = t.nodes_[ai].value;
      Tensor& dA = t.grad_buf(ai);
      for (size_t x = 0; x < dC.v.size(); ++x)
        if (X.v[x] > 0.0) dA.v[x] += dC.v[x];
    };
  }
  return out;
}

Var Tape::exp(Var a) {
  const Tensor& A = value(a);
  Tensor C(A.rows, A.cols);
  for (size_t x = 0; x < A.v.size(); ++x) C.v[x] = std::exp(A.v[x]);
  const bool ng = wants(a.idx);
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      const Tensor& Y = t.nodes_[oi].value;
      Tensor& dA = t.grad_buf(ai);
      for (size_t x = 0; x < dC.v.size(); ++x) dA.v[x] += dC.v[x] * Y.v[x];
    };
  }
  return out;
}

Var Tape::log(Var a) {
  const Tensor& A = value(a);
  Tensor C(A.rows, A.cols);
  for (size_t x = 0; x < A.v.size(); ++x) C.v[x] = std::log(A.v[x]);
  const bool ng = wants(a.idx);
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      const Tensor& X = t.nodes_[ai].value;
      Tensor& dA = t.grad_buf(ai);
      for (size_t x = 0; x < dC.v.size(); ++x) dA.v[x] += dC.v[x] / X.v[x];
    };
  }
  return out;
}

Var Tape::clamp(Var a, double lo, double hi) {
  const Tensor& A = value(a);
  Tensor C(A.rows, A.cols);
  for (size_t x = 0; x < A.v.size(); ++x) C.v[x] = std::clamp(A.v[x], lo, hi);
  const bool ng = wants(a.idx);
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi, lo, hi](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      const Tensor& X = t.nodes_[ai].value;
      Tensor& dA = t.grad_buf(ai);
      for (size_t x = 0; x < dC.v.size(); ++x)
        if (X.v[x] > lo && X.v[x] < hi) dA.v[x] += dC.v[x];
    };
  }
  return out;
}

Var Tape::detach(Var a) { return push(value(a), false, nullptr); }

Var Tape::reshape(Var a, int rows, int cols) {
  const Tensor& A = value(a);
  if (rows * cols != A.size()) throw std::invalid_argument("reshape: element count differs");
  Tensor C(rows, cols, A.v);
  const bool ng = wants(a.idx);
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      Tensor& dA = t.grad_buf(ai);
      for (size_t x = 0; x < dC.v.size(); ++x) dA.v[x] += dC.v[x];
    };
  }
  return out;
}

Var Tape::slice_cols(Var a, int c0, int c1) {
  const Tensor& A = value(a);
  if (c0 < 0 || c1 > A.cols || c0 >= c1) throw std::invalid_argument("slice_cols: bad range");
  Tensor C(A.rows, c1 - c0);
  for (int i = 0; i < A.rows; ++i)
    for (int j = c0; j < c1; ++j) C.at(i, j - c0) = A.at(i, j);
  const bool ng = wants(a.idx);
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi, c0](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      Tensor& dA = t.grad_buf(ai);
      for (int i = 0; i < dC.rows; ++i)
        for (int j = 0; j < dC.cols; ++j) dA.at(i, j + c0) += dC.at(i, j);
    };
  }
  return out;
}

namespace {
Tensor reduce(const Tensor& A, bool over_cols, bool mean) {
  // over_cols: RxC -> Rx1 ; otherwise RxC -> 1xC
  Tensor out = over_cols ? Tensor(A.rows, 1) : Tensor(1, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      if (over_cols)
        out.at(i, 0) += A.at(i, j);
      else
        out.at(0, j) += A.at(i, j);
    }
  if (mean) {
    const double d = over_cols ? A.cols : A.rows;
    for (double& e : out.v) e /= d;
  }
  return out;
}
}  // namespace

Var Tape::row_sum(Var a) {
  const Tensor& A = value(a);
  const bool ng = wants(a.idx);
  Var out = push(reduce(A, true, false), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      Tensor& dA = t.grad_buf(ai);
      for (int i = 0; i < dA.rows; ++i)
        for (int j = 0; j < dA.cols; ++j) dA.at(i, j) += dC.at(i, 0);
    };
  }
  return out;
}

Var Tape::row_mean(Var a) {
  const Tensor& A = value(a);
  const bool ng = wants(a.idx);
  const double inv = 1.0 / A.cols;
  Var out = push(reduce(A, true, true), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi, inv](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      Tensor& dA = t.grad_buf(ai);
      for (int i = 0; i < dA.rows; ++i)
        for (int j = 0; j < dA.cols; ++j) dA.at(i, j) += dC.at(i, 0) * inv;
    };
  }
  return out;
}

Var Tape::col_sum(Var a) {
  const Tensor& A = value(a);
  const bool ng = wants(a.idx);
  Var out = push(reduce(A, false, false), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      Tensor& dA = t.grad_buf(ai);
      for (int i = 0; i < dA.rows; ++i)
        for (int j = 0; j < dA.cols; ++j) dA.at(i, j) += dC.at(0, j);
    };
  }
  return out;
}

Var Tape::col_mean(Var a) {
  const Tensor& A = value(a);
  const bool ng = wants(a.idx);
  const double inv = 1.0 / A.rows;
  Var out = push(reduce(A, false, true), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi, inv](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      Tensor& dA = t.grad_buf(ai);
      for (int i = 0; i < dA.rows; ++i)
        for (int j = 0; j < dA.cols; ++j) dA.at(i, j) += dC.at(0, j) * inv;
    };
  }
  return out;
}

Var Tape::sum_all(Var a) {
  const Tensor& A = value(a);
  double s = 0.0;
  for (const double e : A.v) s += e;
  const bool ng = wants(a.idx);
  Var out = push(Tensor(1, 1, {s}), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi](Tape& t) {
      const double g = t.nodes_[oi].grad.v[0];
      Tensor& dA = t.grad_buf(ai);
      for (double& e : dA.v) e += g;
    };
  }
  return out;
}

Var Tape::mean_all(Var a) {
  const Tensor& A = value(a);
  double s = 0.0;
  for (const double e : A.v) s += e;
  const double inv = 1.0 / A.size();
  const bool ng = wants(a.idx);
  Var out = push(Tensor(1, 1, {s * inv}), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi, inv](Tape& t) {
      const double g = t.nodes_[oi].grad.v[0] * inv;
      Tensor& dA = t.grad_buf(ai);
      for (double& e : dA.v) e += g;
    };
  }
  return out;
}

Var Tape::concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no inputs");
  const int rows = value(parts[0]).rows;
  int cols = 0;
  bool ng = false;
  for (const Var p : parts) {
    if (value(p).rows != rows) throw std::invalid_argument("concat_cols: row counts differ");
    cols += value(p).cols;
    ng = ng || wants(p.idx);
  }
  Tensor C(rows, cols);
  int off = 0;
  for (const Var p : parts) {
    const Tensor& P = value(p);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < P.cols; ++j) C.at(i, off + j) = P.at(i, j);
    off += P.cols;
  }
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    std::vector<int> idx;
    for (const Var p : parts) idx.push_back(p.idx);
    const int oi = out.idx;
    nodes_[oi].back = [idx, oi](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      int off2 = 0;
      for (const int pi : idx) {
        const int pc = t.nodes_[pi].value.cols;
        if (t.wants(pi)) {
          Tensor& dP = t.grad_buf(pi);
          for (int i = 0; i < dC.rows; ++i)
            for (int j = 0; j < pc; ++j) dP.at(i, j) += dC.at(i, off2 + j);
        }
        off2 += pc;
      }
    };
  }
  return out;
}

Var Tape::concat_rows(const std::vector<Var>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: no inputs");
  const int cols = value(parts[0]).cols;
  int rows = 0;
  bool ng = false;
  for (const Var p : parts) {
    if (value(p).cols != cols) throw std::invalid_argument("concat_rows: column counts differ");
    rows += value(p).rows;
    ng = ng || wants(p.idx);
  }
  Tensor C(rows, cols);
  int off = 0;
  for (const Var p : parts) {
    const Tensor& P = value(p);
    for (int i = 0; i < P.rows; ++i)
      for (int j = 0; j < cols; ++j) C.at(off + i, j) = P.at(i, j);
    off += P.rows;
  }
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    std::vector<int> idx;
    for (const Var p : parts) idx.push_back(p.idx);
    const int oi = out.idx;
    nodes_[oi].back = [idx, oi](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      int off2 = 0;
      for (const int pi : idx) {
        const int pr = t.nodes_[pi].value.rows;
        if (t.wants(pi)) {
          Tensor& dP = t.grad_buf(pi);
          for (int i = 0; i < pr; ++i)
            for (int j = 0; j < dC.cols; ++j) dP.at(i, j) += dC.at(off2 + i, j);
        }
        off2 += pr;
      }
    };
  }
  return out;
}

Var Tape::gather_rows(Var a, std::vector<int> idx) {
  const Tensor& A = value(a);
  Tensor C(static_cast<int>(idx.size()), A.cols);
  for (size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= A.rows) throw std::invalid_argument("gather_rows: index out of range");
    for (int j = 0; j < A.cols; ++j) C.at(static_cast<int>(i), j) = A.at(idx[i], j);
  }
  const bool ng = wants(a.idx);
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi, idx = std::move(idx)](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      Tensor& dA = t.grad_buf(ai);
      for (size_t i = 0; i < idx.size(); ++i)
        for (int j = 0; j < dC.cols; ++j) dA.at(idx[i], j) += dC.at(static_cast<int>(i), j);
    };
  }
  return out;
}

Var Tape::scatter_add_rows(Var a, std::vector<int> idx, int out_rows) {
  const Tensor& A = value(a);
  if (static_cast<int>(idx.size()) != A.rows)
    throw std::invalid_argument("scatter_add_rows: one index per input row required");
  Tensor C(out_rows, A.cols);
  for (size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= out_rows)
      throw std::invalid_argument("scatter_add_rows: index out of range");
    for (int j = 0; j < A.cols; ++j) C.at(idx[i], j) += A.at(static_cast<int>(i), j);
  }
  const bool ng = wants(a.idx);
  Var out = push(std::move(C), ng, nullptr);
  if (ng) {
    const int ai = a.idx, oi = out.idx;
    nodes_[oi].back = [ai, oi, idx = std::move(idx)](Tape& t) {
      const Tensor& dC = t.nodes_[oi].grad;
      Tensor& dA = t.grad_buf(ai);
      for (size_t i = 0; i < idx.size(); ++i)
        for (int j = 0; j < dC.cols; ++j) dA.at(static_cast<int>(i), j) += dC.at(idx[i], j);
    };
  }
  return out;
}

void Tape::backward(Var loss) {
  const Tensor& lv = value(loss);
  if (lv.rows != 1 || lv.cols != 1)
    throw std::invalid_argument("backward: loss must be a 1x1 scalar");
  grad_buf(loss.idx).v[0] = 1.0;
  for (int i = loss.idx; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.grad.size() == 0 || !n.back) continue;
    n.back(*this);
  }
}

}  // namespace coadapt::num
