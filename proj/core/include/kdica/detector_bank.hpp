#pragma once

#include <cstdint>
#include <vector>

#include "kdica/calibration.hpp"
#include "kdica/svm.hpp"
#include "kdica/types.hpp"

namespace kdica {

/// One trained attribute head: the linear detector plus its probability map.
/// Degenerate attributes (single class in training) are kept as skipped
/// placeholders so indices stay aligned.
struct AttributeDetector {
  LinearDetector svm;
  PlattCalibrator calibrator;
  bool skipped = false;
};

struct DetectorBank {
  std::vector<AttributeDetector> detectors;

  int num_attributes() const { return static_cast<int>(detectors.size()); }
  std::vector<int> skipped_attributes() const;

  /// T x A decision scores; skipped attributes yield 0.
  Matrix decision_scores(const Matrix& features) const;
  /// T x A calibrated probabilities; skipped attributes yield 0.5.
  Matrix probabilities(const Matrix& features) const;
};

struct BankConfig {
  double c = 1.0;
  int epochs = 200;
  std::uint64_t seed = 0;
  bool fit_calibrators = true;  // off for cross-validation (AUC is rank-based)
  double calibration_holdout = 0.2;
};

/// Trains one detector per attribute column, in parallel. Calibration uses a
/// class-stratified holdout scored by a model trained on the remainder; the
/// final weights are refit on all samples. Every random draw comes from a
/// substream named by the attribute index, so results do not depend on the
/// thread schedule.
DetectorBank train_detector_bank(const Matrix& features, const IntMatrix& attributes,
                                 const BankConfig& config);

}  // namespace kdica
