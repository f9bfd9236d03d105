#pragma once

#include <optional>
#include <vector>

#include "kdica/types.hpp"

namespace kdica {

struct RetrievalResult {
  Vector scores;             // summed probabilities per image
  std::vector<int> ranking;  // image indices, best first; ties by index
  IntVector relevance;       // 1 iff the image has every queried attribute
  std::optional<double> auc_value;  // undefined without both relevant and irrelevant images
};

/// Multi-attribute retrieval by score fusion: each image scores the sum of
/// its calibrated probabilities over the queried attributes; ground truth is
/// conjunctive. A single-attribute query therefore reproduces that
/// attribute's detection ranking and AUC exactly.
RetrievalResult retrieve(const Matrix& probabilities, const std::vector<int>& query,
                         const IntMatrix& attributes);

}  // namespace kdica
