#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kdica/dataset.hpp"
#include "kdica/detector_bank.hpp"
#include "kdica/kdica.hpp"
#include "kdica/types.hpp"

namespace kdica {

/// Feature pathway: the learned projection with (kdica) or without (udica)
/// the attribute-alignment term, or the input features untouched (raw).
enum class Mode { kdica, udica, raw };

Mode mode_from_string(const std::string& name);
std::string to_string(Mode mode);

struct ExperimentConfig {
  std::vector<double> c_grid{0.01, 0.1, 1.0, 10.0, 100.0};
  std::vector<int> b_grid{30, 50, 70, 90, 110, 130, 150};
  std::vector<double> gamma_grid{0.2, 0.5, 0.8};
  int folds = 5;
  std::uint64_t seed = 0;
  Mode mode = Mode::kdica;
  KernelFamily family = KernelFamily::rbf;
  double bandwidth = 1.0;
  std::optional<double> epsilon;
  int svm_epochs = 200;
  bool normalize = true;  // row-normalize features before any kernel work
};

struct CvCell {
  double c = 1.0;
  int b = 0;
  double gamma = 1.0;
  double mean_auc = 0.0;
};

struct CvResult {
  double chosen_c = 1.0;
  int chosen_b = 0;          // 0 when the mode has no projection (raw)
  double chosen_gamma = 1.0; // 1 for udica and raw
  std::vector<CvCell> stage_one;  // (C, b) sweep at gamma = 1
  std::vector<CvCell> stage_two;  // gamma sweep at the chosen (C, b)
  int folds_used = 0;
  std::vector<std::string> warnings;
};

/// Two-stage grid selection on class-stratified folds: (C, b) first with the
/// pure variance objective, then gamma with (C, b) held fixed. The criterion
/// is mean attribute AUC of fold-validation decision scores; ties prefer
/// smaller b, then smaller C, then larger gamma.
CvResult cross_validate(const Dataset& train, const ExperimentConfig& cfg);

struct DetectConfig {
  Mode mode = Mode::kdica;
  double c = 1.0;
  int b = 2;
  double gamma = 0.5;
  KernelFamily family = KernelFamily::rbf;
  double bandwidth = 1.0;
  std::optional<double> epsilon;
  int svm_epochs = 200;
  std::uint64_t seed = 0;
  bool normalize = true;
};

struct DetectionResult {
  Mode mode = Mode::kdica;
  Matrix scores;         // T x A decision values
  Matrix probabilities;  // T x A calibrated posteriors
  std::vector<std::optional<double>> attribute_auc;  // per attribute on test
  std::optional<double> mean_auc;                    // macro average where defined
  std::vector<int> skipped_attributes;               // degenerate in training
  KdicaModel model;  // fitted projection; empty in raw mode
  DetectorBank bank;
};

/// Fits the representation on train per mode, trains one detector per
/// attribute, scores the test set and reports per-attribute AUC (computed on
/// the calibrated probabilities; AUC is rank-based so this matches the raw
/// scores). Attributes with undefined AUC (skipped in training, or
/// single-class in test) are excluded from the mean.
DetectionResult detect_attributes(const Dataset& train, const Dataset& test,
                                  const DetectConfig& cfg);

}  // namespace kdica
