#pragma once

#include <optional>
#include <utility>

#include "kdica/dataset.hpp"
#include "kdica/domain_variance.hpp"
#include "kdica/kernels.hpp"
#include "kdica/types.hpp"

namespace kdica {

struct KdicaConfig {
  double gamma = 0.5;             // 1 = pure variance objective (UDICA)
  int num_components = 2;         // b, number of leading eigenvectors kept
  std::optional<double> epsilon;  // ridge on the right-hand side; default 1e-8 tr(K)/M
  KernelFamily family = KernelFamily::rbf;
  double bandwidth = 1.0;

  void validate(int num_samples) const;
};

/// Fitted projection plus everything needed to embed unseen samples: the
/// training features (to evaluate cross kernels) and the centering statistics.
struct KdicaModel {
  Matrix projection;         // M x b, columns RHS-orthonormal, sign-pinned
  Vector eigenvalues;        // length b, nonincreasing
  KernelMatrix train_stats;  // centered flag + raw column means/grand mean + family/bandwidth
  Matrix train_features;     // M x D
  double gamma = 0.5;
  double epsilon_used = 0.0;
  bool l2_normalized = false;  // whether inputs were row-normalized before fitting

  int num_components() const { return static_cast<int>(projection.cols()); }
  int num_train_samples() const { return static_cast<int>(projection.rows()); }
};

/// A_lhs = gamma K^2 / M + (1 - gamma) K L K,
/// R_rhs = K Q K + K + epsilon I. Both symmetrized after assembly.
std::pair<Matrix, Matrix> assemble_objective(const KernelMatrix& k, const AttributeKernel& l,
                                             const QMatrix& q, double gamma, double epsilon);

/// Top-b eigenpairs of A v = lambda R v, R positive definite. Solved by
/// Cholesky reduction to a standard symmetric problem. Returned vectors
/// satisfy v_i^T R v_j = delta_ij and carry the largest-magnitude-entry-
/// positive sign convention; eigenvalues are nonincreasing.
std::pair<Vector, Matrix> generalized_symmetric_eig(const Matrix& a_lhs, const Matrix& r_rhs,
                                                    int num_pairs);

KdicaModel fit(const Dataset& train, const KdicaConfig& config);

/// Empirical kernel map of unseen samples: center the cross kernel with the
/// stored statistics, then project. Training features reproduce K B.
Matrix transform(const KdicaModel& model, const Matrix& features);

/// Rayleigh quotient of the fitted projection,
/// tr(gamma B'K^2B/M + (1-gamma) B'KLKB) / tr(B'KQKB + B'KB).
double objective_value(const KdicaModel& model, const KernelMatrix& k, const AttributeKernel& l,
                       const QMatrix& q, double gamma);

}  // namespace kdica
