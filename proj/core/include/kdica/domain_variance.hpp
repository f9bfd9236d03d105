#pragma once

#include "kdica/kernels.hpp"
#include "kdica/types.hpp"

namespace kdica {

/// Coefficient matrix Q with tr(KQ) = (1/C) sum_y |mu_y - mu_0|^2, the
/// variance of the per-domain kernel mean embeddings around their unweighted
/// mean.
struct QMatrix {
  Matrix values;           // M x M
  IntVector domain_counts; // length C
};

/// Q[m][m'] = delta(y_m = y_m') / (C n_{y_m}^2) - 1 / (C^2 n_{y_m} n_{y_m'}).
QMatrix build_q(const IntVector& domain_labels, int num_domains);

/// tr(K Q), clamped to be nonnegative.
double distributional_variance(const KernelMatrix& k, const QMatrix& q);

}  // namespace kdica
