#include "kdica/calibration.hpp"

#include <cmath>
#include <string>

namespace kdica {

double PlattCalibrator::probability(double score) const {
  double z = slope * score + intercept;
  // Evaluate from the side that keeps exp() small.
  if (z >= 0.0) {
    double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

Vector PlattCalibrator::probabilities(const Vector& scores) const {
  Vector out(scores.size());
  for (int i = 0; i < scores.size(); ++i) out[i] = probability(scores[i]);
  return out;
}

namespace {

/// Negative log-likelihood of the smoothed targets under the sigmoid,
/// computed in the overflow-safe split form.
double nll(const Vector& scores, const Vector& targets, double a, double b) {
  double f = 0.0;
  for (int i = 0; i < scores.size(); ++i) {
    double z = a * scores[i] + b;
    if (z >= 0.0)
      f += targets[i] * z + std::log1p(std::exp(-z));
    else
      f += (targets[i] - 1.0) * z + std::log1p(std::exp(z));
  }
  return f;
}

}  // namespace

PlattCalibrator calibrate(const Vector& scores, const IntVector& labels) {
  if (scores.size() == 0) throw ValidationError("calibration input is empty");
  if (labels.size() != scores.size())
    throw ValidationError("calibration label count " + std::to_string(labels.size()) +
                          " does not match score count " + std::to_string(scores.size()));
  if (!scores.allFinite()) throw ValidationError("calibration scores contain NaN or infinity");

  int pos = 0, neg = 0;
  for (int i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1)
      ++pos;
    else if (labels[i] == 0)
      ++neg;
    else
      throw ValidationError("calibration label " + std::to_string(labels[i]) +
                            " is not binary");
  }
  if (pos == 0 || neg == 0)
    throw ValidationError("degenerate attribute: calibration labels contain a single class");

  const double hi = (pos + 1.0) / (pos + 2.0);
  const double lo = 1.0 / (neg + 2.0);
  Vector targets(labels.size());
  for (int i = 0; i < labels.size(); ++i) targets[i] = labels[i] == 1 ? hi : lo;

  // Newton iterations on (a, b), following the numerically careful variant of
  // Platt's fit: tiny Hessian floor, backtracking line search.
  const int max_iter = 100;
  const double min_step = 1e-10;
  const double hess_floor = 1e-12;
  double a = 0.0;
  double b = std::log((neg + 1.0) / (pos + 1.0));
  double f = nll(scores, targets, a, b);

  for (int it = 0; it < max_iter; ++it) {
    double h11 = hess_floor, h22 = hess_floor, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (int i = 0; i < scores.size(); ++i) {
      double z = a * scores[i] + b;
      double p, q;
      if (z >= 0.0) {
        double e = std::exp(-z);
        p = e / (1.0 + e);
        q = 1.0 / (1.0 + e);
      } else {
        double e = std::exp(z);
        p = 1.0 / (1.0 + e);
        q = e / (1.0 + e);
      }
      double d2 = p * q;
      h11 += scores[i] * scores[i] * d2;
      h22 += d2;
      h21 += scores[i] * d2;
      double d1 = targets[i] - p;
      g1 += scores[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;

    double det = h11 * h22 - h21 * h21;
    double da = -(h22 * g1 - h21 * g2) / det;
    double db = -(-h21 * g1 + h11 * g2) / det;
    double gd = g1 * da + g2 * db;

    double step = 1.0;
    while (step >= min_step) {
      double na = a + step * da;
      double nb = b + step * db;
      double nf = nll(scores, targets, na, nb);
      if (nf < f + 1e-4 * step * gd) {
        a = na;
        b = nb;
        f = nf;
        break;
      }
      step *= 0.5;
    }
    if (step < min_step) break;
  }

  // The fit can come out flat (or inverted) when scores carry no signal.
  // Clamp the slope strictly negative and refit the intercept alone so the
  // returned map is always increasing in the score.
  const double slope_cap = -1e-8;
  if (a > slope_cap) {
    a = slope_cap;
    for (int it = 0; it < 100; ++it) {
      double g2 = 0.0, h22 = hess_floor;
      for (int i = 0; i < scores.size(); ++i) {
        double z = a * scores[i] + b;
        double p, q;
        if (z >= 0.0) {
          double e = std::exp(-z);
          p = e / (1.0 + e);
          q = 1.0 / (1.0 + e);
        } else {
          double e = std::exp(z);
          p = 1.0 / (1.0 + e);
          q = e / (1.0 + e);
        }
        g2 += targets[i] - p;
        h22 += p * q;
      }
      if (std::abs(g2) < 1e-10) break;
      b -= g2 / h22;
    }
  }

  PlattCalibrator cal;
  cal.slope = a;
  cal.intercept = b;
  return cal;
}

}  // namespace kdica
