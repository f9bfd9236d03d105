#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "kdica/metrics.hpp"
#include "kdica/rng.hpp"
#include "kdica/types.hpp"

using kdica::IntVector;
using kdica::Vector;

namespace {

/// Quadratic reference: count ordered and tied positive/negative pairs.
double brute_force_auc(const Vector& scores, const IntVector& labels) {
  double wins = 0.0;
  long long pairs = 0;
  for (int i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (int j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

}  // namespace

TEST_CASE("perfect ordering scores 1") {
  Vector scores(4);
  scores << 0.1, 0.2, 0.8, 0.9;
  IntVector labels(4);
  labels << 0, 0, 1, 1;
  CHECK(*kdica::auc(scores, labels) == 1.0);

  IntVector reversed(4);
  reversed << 1, 1, 0, 0;
  CHECK(*kdica::auc(scores, reversed) == 0.0);
}

TEST_CASE("all-tied scores land at one half") {
  Vector scores = Vector::Constant(6, 0.3);
  IntVector labels(6);
  labels << 0, 1, 0, 1, 1, 0;
  CHECK(*kdica::auc(scores, labels) == 0.5);
}

TEST_CASE("single-class input is undefined, not zero") {
  Vector scores(3);
  scores << 0.1, 0.5, 0.9;
  CHECK_FALSE(kdica::auc(scores, IntVector::Ones(3)).has_value());
  CHECK_FALSE(kdica::auc(scores, IntVector::Zero(3)).has_value());
}

TEST_CASE("midrank statistic matches the quadratic oracle exactly") {
  kdica::Rng rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 20 + static_cast<int>(rng.next_below(180));
    Vector scores(n);
    IntVector labels(n);
    bool has_pos = false, has_neg = false;
    for (int i = 0; i < n; ++i) {
      // Coarse grid so ties actually occur.
      scores[i] = static_cast<double>(rng.next_below(12)) / 4.0;
      labels[i] = rng.next_bernoulli(0.4) ? 1 : 0;
      (labels[i] == 1 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) continue;
    const auto fast = kdica::auc(scores, labels);
    REQUIRE(fast.has_value());
    CHECK(*fast == brute_force_auc(scores, labels));
  }
}

TEST_CASE("auc is invariant under strictly increasing transforms") {
  kdica::Rng rng(67);
  const int n = 50;
  Vector scores(n);
  IntVector labels(n);
  for (int i = 0; i < n; ++i) {
    scores[i] = rng.next_gaussian();
    labels[i] = rng.next_bernoulli(0.5) ? 1 : 0;
  }
  labels[0] = 1;
  labels[1] = 0;
  const double base = *kdica::auc(scores, labels);

  Vector exp_scores = scores.array().exp();
  CHECK(*kdica::auc(exp_scores, labels) == base);

  Vector affine = 3.0 * scores.array() + 7.0;
  CHECK(*kdica::auc(affine, labels) == base);
}

TEST_CASE("mean per-class accuracy averages classes equally") {
  IntVector truth(6);
  truth << 0, 0, 0, 0, 1, 1;
  IntVector predicted(6);
  predicted << 0, 0, 0, 0, 1, 0;  // class 0: 4/4, class 1: 1/2
  CHECK(kdica::mean_per_class_accuracy(predicted, truth) == doctest::Approx(0.75));

  IntVector all_wrong(6);
  all_wrong << 1, 1, 1, 1, 0, 0;
  CHECK(kdica::mean_per_class_accuracy(all_wrong, truth) == 0.0);
  CHECK(kdica::mean_per_class_accuracy(truth, truth) == 1.0);
}

TEST_CASE("metric inputs must agree in length") {
  Vector scores(3);
  scores << 0.1, 0.2, 0.3;
  IntVector labels(2);
  labels << 0, 1;
  CHECK_THROWS_AS(kdica::auc(scores, labels), kdica::ValidationError);
  IntVector truth(3);
  truth << 0, 1, 0;
  CHECK_THROWS_AS(kdica::mean_per_class_accuracy(labels, truth), kdica::ValidationError);
}
