#pragma once

#include "coadapt/num/tensor.hpp"

namespace coadapt::num {

struct PcaResult {
  Tensor mean;         // 1 x d
  Tensor axis1;        // 1 x d, unit norm
  Tensor axis2;        // 1 x d, unit norm, orthogonal to axis1
  double var1 = 0.0;   // explained variances, var1 >= var2
  double var2 = 0.0;
  Tensor projections;  // n x 2, centered data onto (axis1, axis2)
  bool degenerate = false;  // data rank < 2: axis2 picked arbitrarily in the null space
};

// Top-2 principal axes via power iteration with deflation.
// Requires at least 3 rows and 2 columns.
PcaResult pca_top2(const Tensor& data);

}  // namespace coadapt::num
