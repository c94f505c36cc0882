#include "coadapt/num/pca.hpp"

#include <cmath>
#include <stdexcept>

namespace coadapt::num {

namespace {

double dot(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
  return s;
}

void normalize(Tensor& v) {
  const double n = std::sqrt(dot(v, v));
  if (n > 0.0)
    for (double& e : v.v) e /= n;
}

// Dominant eigenvector of symmetric C, optionally constrained orthogonal
// to `against`. Returns the Rayleigh quotient as the eigenvalue.
double power_iteration(const Tensor& c, Tensor& v, const Tensor* against) {
  const int d = c.rows;
  // Deterministic start; fall back to basis vectors if the orthogonalized
  // start collapses to zero.
  for (int attempt = 0; attempt <= d; ++attempt) {
    v = Tensor(1, d);
    if (attempt == 0) {
      for (int i = 0; i < d; ++i) v.v[i] = 1.0 + 0.01 * (i + 1);
    } else {
      v.v[attempt - 1] = 1.0;
    }
    if (against) {
      const double p = dot(v, *against);
      for (int i = 0; i < d; ++i) v.v[i] -= p * against->v[i];
    }
    if (std::sqrt(dot(v, v)) > 1e-8) break;
  }
  normalize(v);
  Tensor next(1, d);
  for (int iter = 0; iter < 10000; ++iter) {
    for (int i = 0; i < d; ++i) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) s += c.at(i, j) * v.v[j];
      next.v[i] = s;
    }
    if (against) {
      const double p = dot(next, *against);
      for (int i = 0; i < d; ++i) next.v[i] -= p * against->v[i];
    }
    const double norm = std::sqrt(dot(next, next));
    if (norm < 1e-300) break;  // null space: keep previous direction
    double diff = 0.0;
    for (int i = 0; i < d; ++i) {
      const double e = next.v[i] / norm;
      diff = std::max(diff, std::abs(e - v.v[i]));
      v.v[i] = e;
    }
    if (diff < 1e-14) break;
  }
  Tensor cv(1, d);
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += c.at(i, j) * v.v[j];
    cv.v[i] = s;
  }
  return dot(v, cv);
}

}  // namespace

PcaResult pca_top2(const Tensor& data) {
  if (data.rows < 3 || data.cols < 2)
    throw std::invalid_argument("pca_top2: need at least 3 rows and 2 columns");
  const int n = data.rows, d = data.cols;

  PcaResult r;
  r.mean = Tensor(1, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) r.mean.v[j] += data.at(i, j);
  for (double& e : r.mean.v) e /= n;

  Tensor centered(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) centered.at(i, j) = data.at(i, j) - r.mean.v[j];

  Tensor cov(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += centered.at(k, i) * centered.at(k, j);
      cov.at(i, j) = s / (n - 1);
    }

  r.var1 = power_iteration(cov, r.axis1, nullptr);

  // Deflate and find the second axis orthogonal to the first.
  Tensor deflated = cov;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) deflated.at(i, j) -= r.var1 * r.axis1.v[i] * r.axis1.v[j];
  r.var2 = power_iteration(deflated, r.axis2, &r.axis1);

  const double scale = std::max(std::abs(r.var1), 1.0);
  if (r.var2 < 1e-12 * scale) {
    r.degenerate = true;
    r.var2 = std::max(r.var2, 0.0);
    // Pick the basis vector least aligned with axis1, Gram-Schmidt it.
    int best = 0;
    double best_abs = 2.0;
    for (int j = 0; j < d; ++j)
      if (std::abs(r.axis1.v[j]) < best_abs) best_abs = std::abs(r.axis1.v[j]), best = j;
    r.axis2 = Tensor(1, d);
    r.axis2.v[best] = 1.0;
    const double p = dot(r.axis2, r.axis1);
    for (int j = 0; j < d; ++j) r.axis2.v[j] -= p * r.axis1.v[j];
    normalize(r.axis2);
  }

  r.projections = Tensor(n, 2);
  for (int i = 0; i < n; ++i) {
    double u = 0.0, w = 0.0;
    for (int j = 0; j < d; ++j) {
      u += centered.at(i, j) * r.axis1.v[j];
      w += centered.at(i, j) * r.axis2.v[j];
    }
    r.projections.at(i, 0) = u;
    r.projections.at(i, 1) = w;
  }
  return r;
}

}  // namespace coadapt::num
