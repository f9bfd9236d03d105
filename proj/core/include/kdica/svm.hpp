#pragma once

#include <cstdint>
#include <vector>

#include "kdica/types.hpp"

namespace kdica {

/// Linear decision function <w, x> + bias trained with hinge loss.
struct LinearDetector {
  Vector weights;
  double bias = 0.0;
  double c = 1.0;   // hinge penalty of the trained objective
  int epochs = 0;

  double decision(const Vector& x) const { return weights.dot(x) + bias; }
  Vector decisions(const Matrix& features) const {
    return (features * weights).array() + bias;
  }
};

/// Hinge objective (1/2)|w|^2 + C sum_i max(0, 1 - y_i (<w,x_i> + b)) with
/// labels in {0,1} read as {-1,+1}.
double svm_objective(const LinearDetector& detector, const Matrix& features,
                     const IntVector& labels);

/// Deterministic Pegasos-style subgradient descent, lambda = 1/(C M), with a
/// seeded shuffle per epoch. Bias is unregularized. Returns the epoch-end
/// iterate with the lowest objective. When `objective_trace` is given it
/// receives, after every epoch, the objective of the iterate kept so far,
/// which makes the trace nonincreasing.
LinearDetector train_svm(const Matrix& features, const IntVector& labels, double c,
                         std::uint64_t seed, int epochs = 200,
                         std::vector<double>* objective_trace = nullptr);

}  // namespace kdica
