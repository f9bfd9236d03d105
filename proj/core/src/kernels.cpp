#include "kdica/kernels.hpp"

#include <cmath>

#include "kdica/parallel.hpp"

namespace kdica {

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "rbf") return KernelFamily::rbf;
  if (name == "linear") return KernelFamily::linear;
  throw ValidationError("unknown kernel family \"" + name + "\" (expected rbf or linear)");
}

std::string to_string(KernelFamily family) {
  return family == KernelFamily::rbf ? "rbf" : "linear";
}

namespace {

void check_features(const Matrix& x, const char* what) {
  if (x.rows() == 0 || x.cols() == 0)
    throw ValidationError(std::string(what) + " matrix is empty");
  if (!x.allFinite())
    throw ValidationError(std::string(what) + " matrix contains NaN or infinity");
}

/// Centers a symmetric matrix in place via the stored-means form
/// ((v - cm_i) - cm_j) + g, mirroring the upper triangle so the result stays
/// bitwise symmetric.
void center_symmetric(Matrix& k, Vector& col_means, double& grand_mean) {
  const int m = static_cast<int>(k.rows());
  col_means = k.colwise().mean();
  grand_mean = col_means.mean();
  parallel_for(m, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      for (int j = i; j < m; ++j) {
        double v = ((k(i, j) - col_means[i]) - col_means[j]) + grand_mean;
        k(i, j) = v;
        k(j, i) = v;
      }
    }
  });
}

}  // namespace

KernelMatrix gram(const Matrix& features, KernelFamily family, double bandwidth) {
  check_features(features, "feature");
  if (family == KernelFamily::rbf && bandwidth <= 0.0)
    throw ValidationError("rbf bandwidth must be positive, got " + std::to_string(bandwidth));

  const int m = static_cast<int>(features.rows());
  Matrix inner = features * features.transpose();
  KernelMatrix out;
  out.family = family;
  out.bandwidth = bandwidth;
  out.values.resize(m, m);

  if (family == KernelFamily::linear) {
    parallel_for(m, [&](int begin, int end) {
      for (int i = begin; i < end; ++i)
        for (int j = i; j < m; ++j) {
          out.values(i, j) = inner(i, j);
          out.values(j, i) = inner(i, j);
        }
    });
    return out;
  }

  const Vector sq = features.rowwise().squaredNorm();
  const double inv_two_sigma_sq = 1.0 / (2.0 * bandwidth * bandwidth);
  parallel_for(m, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      out.values(i, i) = 1.0;
      for (int j = i + 1; j < m; ++j) {
        double d2 = sq[i] + sq[j] - 2.0 * inner(i, j);
        if (d2 < 0.0) d2 = 0.0;  // tiny negatives from cancellation
        double v = std::exp(-d2 * inv_two_sigma_sq);
        out.values(i, j) = v;
        out.values(j, i) = v;
      }
    }
  });
  return out;
}

Matrix cross_gram(const Matrix& test_features, const Matrix& train_features,
                  KernelFamily family, double bandwidth) {
  check_features(test_features, "test feature");
  check_features(train_features, "training feature");
  if (test_features.cols() != train_features.cols())
    throw ValidationError("test feature dimension " + std::to_string(test_features.cols()) +
                          " does not match training dimension " +
                          std::to_string(train_features.cols()));
  if (family == KernelFamily::rbf && bandwidth <= 0.0)
    throw ValidationError("rbf bandwidth must be positive, got " + std::to_string(bandwidth));

  Matrix inner = test_features * train_features.transpose();
  if (family == KernelFamily::linear) return inner;

  const int t = static_cast<int>(test_features.rows());
  const int m = static_cast<int>(train_features.rows());
  const Vector sq_test = test_features.rowwise().squaredNorm();
  const Vector sq_train = train_features.rowwise().squaredNorm();
  const double inv_two_sigma_sq = 1.0 / (2.0 * bandwidth * bandwidth);
  Matrix out(t, m);
  parallel_for(t, [&](int begin, int end) {
    for (int i = begin; i < end; ++i)
      for (int j = 0; j < m; ++j) {
        double d2 = sq_test[i] + sq_train[j] - 2.0 * inner(i, j);
        if (d2 < 0.0) d2 = 0.0;
        out(i, j) = std::exp(-d2 * inv_two_sigma_sq);
      }
  });
  return out;
}

KernelMatrix center_train(const KernelMatrix& k) {
  if (k.values.rows() != k.values.cols())
    throw ValidationError("kernel matrix is not square");
  if (k.values.rows() == 0) throw ValidationError("kernel matrix is empty");
  KernelMatrix out = k;
  center_symmetric(out.values, out.raw_column_means, out.raw_grand_mean);
  out.centered = true;
  return out;
}

Matrix center_test_rows(const Matrix& k_test, const KernelMatrix& train_stats) {
  if (!train_stats.centered)
    throw ValidationError("training kernel statistics come from an uncentered kernel");
  // Only the stored means are needed, so stats restored from disk work too.
  const int m = static_cast<int>(train_stats.raw_column_means.size());
  if (k_test.cols() != m)
    throw ValidationError("test kernel has " + std::to_string(k_test.cols()) +
                          " columns but the training set has " + std::to_string(m) +
                          " samples");
  const Vector& cm = train_stats.raw_column_means;
  const double g = train_stats.raw_grand_mean;
  Matrix out(k_test.rows(), m);
  const int t = static_cast<int>(k_test.rows());
  parallel_for(t, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      double row_mean = k_test.row(i).mean();
      for (int j = 0; j < m; ++j)
        out(i, j) = ((k_test(i, j) - row_mean) - cm[j]) + g;
    }
  });
  return out;
}

AttributeKernel attribute_kernel(const IntMatrix& attributes) {
  if (attributes.rows() == 0 || attributes.cols() == 0)
    throw ValidationError("attribute matrix is empty");
  for (int i = 0; i < attributes.rows(); ++i)
    for (int j = 0; j < attributes.cols(); ++j)
      if (attributes(i, j) != 0 && attributes(i, j) != 1)
        throw ValidationError("non-binary attribute value " +
                              std::to_string(attributes(i, j)) + " at row " +
                              std::to_string(i) + ", column " + std::to_string(j));

  Matrix a = attributes.cast<double>();
  Matrix raw = a * a.transpose();
  // Mirror for bitwise symmetry before centering.
  const int m = static_cast<int>(raw.rows());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) raw(j, i) = raw(i, j);

  AttributeKernel out;
  out.values = std::move(raw);
  Vector cm;
  double g = 0.0;
  center_symmetric(out.values, cm, g);
  out.centered = true;
  return out;
}

}  // namespace kdica
