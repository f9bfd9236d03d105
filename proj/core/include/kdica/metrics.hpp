#pragma once

#include <optional>

#include "kdica/types.hpp"

namespace kdica {

/// Area under the ROC curve via the rank-sum statistic with midranks for
/// ties. Labels are {0,1}. Returns nullopt when only one class is present
/// (the value is undefined, not zero).
std::optional<double> auc(const Vector& scores, const IntVector& labels);

/// Mean of per-class accuracies under predicted labels; classes are the
/// distinct values of `truth`.
double mean_per_class_accuracy(const IntVector& predicted, const IntVector& truth);

}  // namespace kdica
