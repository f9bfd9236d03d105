#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "kdica/calibration.hpp"
#include "kdica/metrics.hpp"
#include "kdica/rng.hpp"
#include "kdica/types.hpp"

using kdica::IntVector;
using kdica::PlattCalibrator;
using kdica::Vector;

TEST_CASE("separated scores map across the half point") {
  Vector scores(6);
  scores << -3.0, -2.5, -2.0, 2.0, 2.5, 3.0;
  IntVector labels(6);
  labels << 0, 0, 0, 1, 1, 1;
  const PlattCalibrator cal = kdica::calibrate(scores, labels);
  CHECK(cal.slope < 0.0);
  CHECK(cal.probability(-2.0) < 0.5);  // largest negative score
  CHECK(cal.probability(2.0) > 0.5);   // smallest positive score
}

TEST_CASE("the fitted sigmoid is strictly increasing in the score") {
  Vector scores(8);
  scores << -4, -1, -0.5, 0, 0.5, 1, 2, 4;
  IntVector labels(8);
  labels << 0, 0, 1, 0, 1, 1, 0, 1;
  const PlattCalibrator cal = kdica::calibrate(scores, labels);
  double previous = -1.0;
  for (double s = -5.0; s <= 5.0; s += 0.25) {
    const double p = cal.probability(s);
    CHECK(p > previous);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    previous = p;
  }
}

TEST_CASE("labels independent of scores give a flat map") {
  kdica::Rng rng(21);
  const int n = 60;
  Vector scores(n);
  IntVector labels(n);
  for (int i = 0; i < n; ++i) {
    scores[i] = rng.next_gaussian();
    labels[i] = rng.next_bernoulli(0.5) ? 1 : 0;
  }
  const PlattCalibrator cal = kdica::calibrate(scores, labels);
  for (int i = 0; i < n; ++i) {
    const double p = cal.probability(scores[i]);
    CHECK(p >= 0.05);
    CHECK(p <= 0.95);
  }
}

TEST_CASE("single-class validation sets are rejected") {
  Vector scores(3);
  scores << 0.1, 0.2, 0.3;
  CHECK_THROWS_AS(kdica::calibrate(scores, IntVector::Ones(3)), kdica::ValidationError);
  CHECK_THROWS_AS(kdica::calibrate(scores, IntVector::Zero(3)), kdica::ValidationError);
}

TEST_CASE("calibration preserves the ranking exactly") {
  kdica::Rng rng(23);
  const int n = 40;
  Vector scores(n);
  IntVector labels(n);
  for (int i = 0; i < n; ++i) {
    scores[i] = rng.next_gaussian();
    labels[i] = rng.next_bernoulli(scores[i] > 0 ? 0.8 : 0.2) ? 1 : 0;
  }
  const PlattCalibrator cal = kdica::calibrate(scores, labels);
  const Vector probs = cal.probabilities(scores);
  const auto raw_auc = kdica::auc(scores, labels);
  const auto cal_auc = kdica::auc(probs, labels);
  REQUIRE(raw_auc.has_value());
  REQUIRE(cal_auc.has_value());
  CHECK(*raw_auc == *cal_auc);
}

TEST_CASE("probabilities helper matches the scalar map") {
  PlattCalibrator cal;
  cal.slope = -1.5;
  cal.intercept = 0.25;
  Vector scores(4);
  scores << -2.0, -0.5, 0.0, 3.0;
  const Vector p = cal.probabilities(scores);
  for (int i = 0; i < 4; ++i) {
    const double expected = 1.0 / (1.0 + std::exp(cal.slope * scores[i] + cal.intercept));
    CHECK(p[i] == doctest::Approx(expected).epsilon(1e-15));
  }
}
