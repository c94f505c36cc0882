#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "coadapt/num/rng.hpp"

namespace coadapt::num {

// Dense row-major matrix of doubles. Vectors are 1xN or Nx1 tensors.
struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;

  Tensor() = default;
  Tensor(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, 0.0) {}
  Tensor(int r, int c, std::vector<double> data) : rows(r), cols(c), v(std::move(data)) {
    if (v.size() != static_cast<size_t>(r) * c)
      throw std::invalid_argument("tensor: shape does not match value count");
  }

  static Tensor zeros(int r, int c) { return Tensor(r, c); }
  static Tensor full(int r, int c, double x) {
    Tensor t(r, c);
    for (double& e : t.v) e = x;
    return t;
  }
  static Tensor identity(int n) {
    Tensor t(n, n);
    for (int i = 0; i < n; ++i) t.at(i, i) = 1.0;
    return t;
  }
  static Tensor row(std::vector<double> data) {
    const int n = static_cast<int>(data.size());
    return Tensor(1, n, std::move(data));
  }
  static Tensor uniform(int r, int c, double lo, double hi, Rng& rng) {
    Tensor t(r, c);
    for (double& e : t.v) e = rng.uniform(lo, hi);
    return t;
  }
  static Tensor normal(int r, int c, Rng& rng) {
    Tensor t(r, c);
    for (double& e : t.v) e = rng.normal();
    return t;
  }

  int size() const { return rows * cols; }
  double& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }
  double& operator[](size_t i) { return v[i]; }
  double operator[](size_t i) const { return v[i]; }

  bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }

  bool all_finite() const {
    for (const double e : v)
      if (!std::isfinite(e)) return false;
    return true;
  }
};

// C += A * B, naive but cache-friendly (i-k-j order).
inline void matmul_acc(const Tensor& a, const Tensor& b, Tensor& c) {
  assert(a.cols == b.rows && c.rows == a.rows && c.cols == b.cols);
  const int n = a.rows, k = a.cols, m = b.cols;
  for (int i = 0; i < n; ++i) {
    const double* arow = &a.v[static_cast<size_t>(i) * k];
    double* crow = &c.v[static_cast<size_t>(i) * m];
    for (int p = 0; p < k; ++p) {
      const double aip = arow[p];
      if (aip == 0.0) continue;
      const double* brow = &b.v[static_cast<size_t>(p) * m];
      for (int j = 0; j < m; ++j) crow[j] += aip * brow[j];
    }
  }
}

inline Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: inner dimensions differ");
  Tensor c(a.rows, b.cols);
  matmul_acc(a, b, c);
  return c;
}

inline Tensor transpose(const Tensor& a) {
  Tensor t(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
  return t;
}

// target = (1 - tau) * target + tau * source, elementwise.
inline void lerp_into(Tensor& target, const Tensor& source, double tau) {
  assert(target.same_shape(source));
  for (size_t i = 0; i < target.v.size(); ++i)
    target.v[i] = (1.0 - tau) * target.v[i] + tau * source.v[i];
}

}  // namespace coadapt::num
