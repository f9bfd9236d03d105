#include "kdica/svm.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "kdica/rng.hpp"

namespace kdica {

namespace {

void check_inputs(const Matrix& features, const IntVector& labels, double c, int epochs) {
  if (features.rows() == 0 || features.cols() == 0)
    throw ValidationError("svm features are empty");
  if (labels.size() != features.rows())
    throw ValidationError("svm label count " + std::to_string(labels.size()) +
                          " does not match feature rows " + std::to_string(features.rows()));
  if (c <= 0.0) throw ValidationError("svm penalty C must be positive, got " + std::to_string(c));
  if (epochs < 1) throw ValidationError("svm epoch count must be at least 1");
  int pos = 0, neg = 0;
  for (int i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1)
      ++pos;
    else if (labels[i] == 0)
      ++neg;
    else
      throw ValidationError("svm label " + std::to_string(labels[i]) + " at position " +
                            std::to_string(i) + " is not binary");
  }
  if (pos == 0 || neg == 0)
    throw ValidationError("degenerate attribute: training labels contain a single class");
}

}  // namespace

double svm_objective(const LinearDetector& detector, const Matrix& features,
                     const IntVector& labels) {
  double loss = 0.0;
  for (int i = 0; i < features.rows(); ++i) {
    double y = labels[i] == 1 ? 1.0 : -1.0;
    double margin = y * (features.row(i).dot(detector.weights) + detector.bias);
    if (margin < 1.0) loss += 1.0 - margin;
  }
  return 0.5 * detector.weights.squaredNorm() + detector.c * loss;
}

LinearDetector train_svm(const Matrix& features, const IntVector& labels, double c,
                         std::uint64_t seed, int epochs,
                         std::vector<double>* objective_trace) {
  check_inputs(features, labels, c, epochs);
  const int m = static_cast<int>(features.rows());
  const int d = static_cast<int>(features.cols());
  const double lambda = 1.0 / (c * static_cast<double>(m));
  const double radius = 1.0 / std::sqrt(lambda);

  LinearDetector det;
  det.weights = Vector::Zero(d);
  det.c = c;
  det.epochs = epochs;

  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  Rng rng = Rng::substream(seed, "svm");
  if (objective_trace) objective_trace->clear();

  // The last subgradient iterate oscillates around the optimum, so the best
  // epoch-end iterate by objective is kept and returned instead; the trace
  // reports the objective of that kept model, which is nonincreasing.
  Vector best_weights = det.weights;
  double best_bias = det.bias;
  double best_objective = svm_objective(det, features, labels);

  // Step size 1/(lambda (t + t0)) with t0 = M: one epoch's worth of offset so
  // the first steps are of order C rather than C*M, which keeps the
  // unregularized bias from swinging wildly early on.
  const double t0 = static_cast<double>(m);
  double t = 1.0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (int idx : order) {
      const double eta = 1.0 / (lambda * (t + t0));
      const double y = labels[idx] == 1 ? 1.0 : -1.0;
      const double margin = y * (features.row(idx).dot(det.weights) + det.bias);
      det.weights *= 1.0 - eta * lambda;
      if (margin < 1.0) {
        det.weights += (eta * y) * features.row(idx).transpose();
        det.bias += eta * y;
      }
      const double norm = det.weights.norm();
      if (norm > radius) det.weights *= radius / norm;
      t += 1.0;
    }
    const double objective = svm_objective(det, features, labels);
    if (objective < best_objective) {
      best_objective = objective;
      best_weights = det.weights;
      best_bias = det.bias;
    }
    if (objective_trace) objective_trace->push_back(best_objective);
  }
  det.weights = std::move(best_weights);
  det.bias = best_bias;
  if (!det.weights.allFinite() || !std::isfinite(det.bias))
    throw NumericalError("svm training diverged to non-finite parameters");
  return det;
}

}  // namespace kdica
