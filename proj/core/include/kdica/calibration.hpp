#pragma once

#include "kdica/types.hpp"

namespace kdica {

/// Sigmoid map p(s) = 1 / (1 + exp(slope * s + intercept)) from decision
/// scores to posterior probabilities. slope < 0, so p increases with s.
struct PlattCalibrator {
  double slope = -1.0;
  double intercept = 0.0;

  double probability(double score) const;
  Vector probabilities(const Vector& scores) const;
};

/// Platt scaling with the usual smoothed targets t+ = (N+ + 1)/(N+ + 2),
/// t- = 1/(N- + 2), fitted by Newton's method with backtracking. Labels are
/// {0,1}; both classes must be present.
PlattCalibrator calibrate(const Vector& scores, const IntVector& labels);

}  // namespace kdica
