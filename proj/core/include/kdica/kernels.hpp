#pragma once

#include <string>

#include "kdica/types.hpp"

namespace kdica {

enum class KernelFamily { rbf, linear };

KernelFamily kernel_family_from_string(const std::string& name);
std::string to_string(KernelFamily family);

/// Symmetric Gram matrix. After centering, the column means and grand mean of
/// the raw matrix are kept so unseen samples can be centered consistently.
struct KernelMatrix {
  Matrix values;
  KernelFamily family = KernelFamily::rbf;
  double bandwidth = 1.0;
  bool centered = false;
  Vector raw_column_means;  // length M, filled by center_train
  double raw_grand_mean = 0.0;

  int size() const { return static_cast<int>(values.rows()); }
};

/// Centered inner-product kernel over binary attribute vectors.
struct AttributeKernel {
  Matrix values;
  bool centered = false;
};

/// Raw Gram matrix. rbf: exp(-|x - x'|^2 / (2 bandwidth^2)) with the diagonal
/// pinned to exactly 1; linear: plain dot products. Output is bitwise
/// symmetric regardless of thread count.
KernelMatrix gram(const Matrix& features, KernelFamily family, double bandwidth = 1.0);

/// Raw T x M kernel between test rows and training rows; same families and
/// conventions as gram.
Matrix cross_gram(const Matrix& test_features, const Matrix& train_features,
                  KernelFamily family, double bandwidth = 1.0);

/// H K H with H = I - (1/M) 1 1^T. Stores the raw column means and grand mean
/// on the result for center_test_rows.
KernelMatrix center_train(const KernelMatrix& k);

/// Out-of-sample centering (k_test - 1 colmeans^T) H, consistent with the
/// training-side H K H. Training rows fed back in reproduce the centered
/// training rows.
Matrix center_test_rows(const Matrix& k_test, const KernelMatrix& train_stats);

/// Centered attribute target kernel H (A A^T) H.
AttributeKernel attribute_kernel(const IntMatrix& attributes);

}  // namespace kdica
