#include "kdica/kdica.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace kdica {

void KdicaConfig::validate(int num_samples) const {
  if (gamma < 0.0 || gamma > 1.0)
    throw ValidationError("gamma " + std::to_string(gamma) + " outside [0, 1]");
  if (num_components < 1)
    throw ValidationError("component count must be at least 1, got " +
                          std::to_string(num_components));
  if (num_components > num_samples)
    throw ValidationError("component count " + std::to_string(num_components) +
                          " exceeds sample count " + std::to_string(num_samples));
  if (epsilon && *epsilon < 0.0)
    throw ValidationError("ridge epsilon must be nonnegative, got " + std::to_string(*epsilon));
  if (family == KernelFamily::rbf && bandwidth <= 0.0)
    throw ValidationError("rbf bandwidth must be positive, got " + std::to_string(bandwidth));
}

namespace {

void symmetrize(Matrix& x) { x = ((x + x.transpose()) * 0.5).eval(); }

}  // namespace

std::pair<Matrix, Matrix> assemble_objective(const KernelMatrix& k, const AttributeKernel& l,
                                             const QMatrix& q, double gamma, double epsilon) {
  const Eigen::Index m = k.values.rows();
  if (l.values.rows() != m)
    throw ValidationError("attribute kernel size " + std::to_string(l.values.rows()) +
                          " does not match kernel size " + std::to_string(m));
  if (q.values.rows() != m)
    throw ValidationError("Q size " + std::to_string(q.values.rows()) +
                          " does not match kernel size " + std::to_string(m));
  if (gamma < 0.0 || gamma > 1.0)
    throw ValidationError("gamma " + std::to_string(gamma) + " outside [0, 1]");
  if (epsilon < 0.0)
    throw ValidationError("ridge epsilon must be nonnegative, got " + std::to_string(epsilon));

  const Matrix& kk = k.values;
  Matrix a_lhs;
  if (gamma == 1.0) {
    a_lhs = (kk * kk) / static_cast<double>(m);
  } else if (gamma == 0.0) {
    a_lhs = kk * l.values * kk;
  } else {
    a_lhs = gamma * (kk * kk) / static_cast<double>(m) + (1.0 - gamma) * (kk * l.values * kk);
  }
  symmetrize(a_lhs);

  Matrix r_rhs = kk * q.values * kk;
  symmetrize(r_rhs);
  r_rhs += kk;
  r_rhs.diagonal().array() += epsilon;
  return {std::move(a_lhs), std::move(r_rhs)};
}

std::pair<Vector, Matrix> generalized_symmetric_eig(const Matrix& a_lhs, const Matrix& r_rhs,
                                                    int num_pairs) {
  const Eigen::Index m = a_lhs.rows();
  if (a_lhs.cols() != m || r_rhs.rows() != m || r_rhs.cols() != m)
    throw ValidationError("eigenproblem matrices must be square and equally sized");
  if (num_pairs < 1 || num_pairs > m)
    throw ValidationError("requested " + std::to_string(num_pairs) +
                          " eigenpairs from a " + std::to_string(m) + "-dimensional pencil");

  Eigen::LLT<Matrix> llt(r_rhs);
  if (llt.info() != Eigen::Success)
    throw NumericalError(
        "right-hand-side matrix is not positive definite; increase the ridge epsilon");

  // Reduce A v = lambda R v with R = G G^T to the standard symmetric problem
  // (G^-1 A G^-T) u = lambda u, u = G^T v.
  Matrix x = llt.matrixL().solve(a_lhs);                 // G^-1 A
  Matrix c = llt.matrixL().solve(x.transpose().eval());  // G^-1 (G^-1 A)^T
  symmetrize(c);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(c);
  if (eig.info() != Eigen::Success)
    throw NumericalError("symmetric eigendecomposition did not converge");

  // Eigen sorts ascending; take the trailing block and reverse.
  Vector values(num_pairs);
  Matrix u(m, num_pairs);
  for (int i = 0; i < num_pairs; ++i) {
    values[i] = eig.eigenvalues()[m - 1 - i];
    u.col(i) = eig.eigenvectors().col(m - 1 - i);
  }
  Matrix vectors = llt.matrixU().solve(u);  // v = G^-T u

  // Pin the sign: largest-magnitude entry of each column positive (first such
  // entry on exact magnitude ties).
  for (int j = 0; j < num_pairs; ++j) {
    int arg = 0;
    double best = std::abs(vectors(0, j));
    for (Eigen::Index i = 1; i < m; ++i) {
      double mag = std::abs(vectors(i, j));
      if (mag > best) {
        best = mag;
        arg = static_cast<int>(i);
      }
    }
    if (vectors(arg, j) < 0.0) vectors.col(j) = -vectors.col(j);
  }
  return {std::move(values), std::move(vectors)};
}

KdicaModel fit(const Dataset& train, const KdicaConfig& config) {
  train.validate();
  config.validate(train.num_samples());

  KernelMatrix k = center_train(gram(train.features, config.family, config.bandwidth));
  AttributeKernel l = attribute_kernel(train.attributes);
  QMatrix q = build_q(train.domain_labels, train.num_classes());

  const double epsilon = config.epsilon
                             ? *config.epsilon
                             : 1e-8 * k.values.trace() / static_cast<double>(train.num_samples());
  auto [a_lhs, r_rhs] = assemble_objective(k, l, q, config.gamma, epsilon);
  auto [values, vectors] = generalized_symmetric_eig(a_lhs, r_rhs, config.num_components);

  KdicaModel model;
  model.projection = std::move(vectors);
  model.eigenvalues = std::move(values);
  model.train_stats = std::move(k);
  model.train_stats.values.resize(0, 0);  // keep only the centering statistics
  model.train_features = train.features;
  model.gamma = config.gamma;
  model.epsilon_used = epsilon;
  return model;
}

Matrix transform(const KdicaModel& model, const Matrix& features) {
  if (features.cols() != model.train_features.cols())
    throw ValidationError("feature dimension " + std::to_string(features.cols()) +
                          " does not match training dimension " +
                          std::to_string(model.train_features.cols()));
  Matrix cross = cross_gram(features, model.train_features, model.train_stats.family,
                            model.train_stats.bandwidth);
  return center_test_rows(cross, model.train_stats) * model.projection;
}

double objective_value(const KdicaModel& model, const KernelMatrix& k, const AttributeKernel& l,
                       const QMatrix& q, double gamma) {
  const Matrix& b = model.projection;
  const Matrix kb = k.values * b;
  double numer = gamma * kb.squaredNorm() / static_cast<double>(k.values.rows());
  if (gamma < 1.0) numer += (1.0 - gamma) * (kb.transpose() * l.values * kb).trace();
  double denom = (kb.transpose() * q.values * kb).trace() + (b.transpose() * kb).trace();
  return numer / denom;
}

}  // namespace kdica
