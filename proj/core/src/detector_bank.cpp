#include "kdica/detector_bank.hpp"

#include <string>

#include "kdica/parallel.hpp"
#include "kdica/rng.hpp"

namespace kdica {

std::vector<int> DetectorBank::skipped_attributes() const {
  std::vector<int> out;
  for (int i = 0; i < num_attributes(); ++i)
    if (detectors[static_cast<std::size_t>(i)].skipped) out.push_back(i);
  return out;
}

Matrix DetectorBank::decision_scores(const Matrix& features) const {
  Matrix out(features.rows(), num_attributes());
  for (int a = 0; a < num_attributes(); ++a) {
    const auto& det = detectors[static_cast<std::size_t>(a)];
    if (det.skipped)
      out.col(a).setZero();
    else
      out.col(a) = det.svm.decisions(features);
  }
  return out;
}

Matrix DetectorBank::probabilities(const Matrix& features) const {
  Matrix out(features.rows(), num_attributes());
  for (int a = 0; a < num_attributes(); ++a) {
    const auto& det = detectors[static_cast<std::size_t>(a)];
    if (det.skipped) {
      out.col(a).setConstant(0.5);
    } else {
      Vector s = det.svm.decisions(features);
      out.col(a) = det.calibrator.probabilities(s);
    }
  }
  return out;
}

namespace {

/// Rows selected from a matrix by index list.
Matrix take_rows(const Matrix& m, const std::vector<int>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

AttributeDetector train_one(const Matrix& features, const IntVector& labels, int attr,
                            const BankConfig& config) {
  AttributeDetector out;
  const int m = static_cast<int>(labels.size());
  int pos = 0;
  for (int i = 0; i < m; ++i)
    if (labels[i] == 1) ++pos;
  const int neg = m - pos;
  if (pos == 0 || neg == 0) {
    out.skipped = true;
    return out;
  }

  const std::string tag = "attr-" + std::to_string(attr);
  out.svm = train_svm(features, labels, config.c, Rng::mix(config.seed, tag + "-final"),
                      config.epochs);
  if (!config.fit_calibrators) return out;

  // Class-stratified calibration holdout; needs at least one sample of each
  // class on both sides, otherwise fall back to self-calibration.
  std::vector<int> pos_idx, neg_idx;
  for (int i = 0; i < m; ++i) (labels[i] == 1 ? pos_idx : neg_idx).push_back(i);
  Rng split_rng = Rng::substream(config.seed, tag + "-calsplit");
  split_rng.shuffle(pos_idx);
  split_rng.shuffle(neg_idx);
  const int hold_pos = static_cast<int>(config.calibration_holdout * pos);
  const int hold_neg = static_cast<int>(config.calibration_holdout * neg);

  if (hold_pos < 1 || hold_neg < 1 || hold_pos >= pos || hold_neg >= neg) {
    Vector scores = out.svm.decisions(features);
    out.calibrator = calibrate(scores, labels);
    return out;
  }

  std::vector<int> hold(pos_idx.begin(), pos_idx.begin() + hold_pos);
  hold.insert(hold.end(), neg_idx.begin(), neg_idx.begin() + hold_neg);
  std::vector<int> rest(pos_idx.begin() + hold_pos, pos_idx.end());
  rest.insert(rest.end(), neg_idx.begin() + hold_neg, neg_idx.end());

  Matrix rest_x = take_rows(features, rest);
  IntVector rest_y(static_cast<Eigen::Index>(rest.size()));
  for (std::size_t i = 0; i < rest.size(); ++i)
    rest_y[static_cast<Eigen::Index>(i)] = labels[rest[i]];
  LinearDetector partial = train_svm(rest_x, rest_y, config.c,
                                     Rng::mix(config.seed, tag + "-cal"), config.epochs);

  Matrix hold_x = take_rows(features, hold);
  IntVector hold_y(static_cast<Eigen::Index>(hold.size()));
  for (std::size_t i = 0; i < hold.size(); ++i)
    hold_y[static_cast<Eigen::Index>(i)] = labels[hold[i]];
  out.calibrator = calibrate(partial.decisions(hold_x), hold_y);
  return out;
}

}  // namespace

DetectorBank train_detector_bank(const Matrix& features, const IntMatrix& attributes,
                                 const BankConfig& config) {
  if (attributes.rows() != features.rows())
    throw ValidationError("attribute row count " + std::to_string(attributes.rows()) +
                          " does not match feature rows " + std::to_string(features.rows()));
  if (attributes.cols() == 0) throw ValidationError("no attribute columns to train on");
  if (config.calibration_holdout <= 0.0 || config.calibration_holdout >= 1.0)
    throw ValidationError("calibration holdout fraction must lie in (0, 1)");

  const int num_attrs = static_cast<int>(attributes.cols());
  DetectorBank bank;
  bank.detectors.resize(static_cast<std::size_t>(num_attrs));
  parallel_for(num_attrs, [&](int begin, int end) {
    for (int a = begin; a < end; ++a)
      bank.detectors[static_cast<std::size_t>(a)] =
          train_one(features, attributes.col(a), a, config);
  });
  return bank;
}

}  // namespace kdica
