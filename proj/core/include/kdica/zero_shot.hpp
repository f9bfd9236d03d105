#pragma once

#include <vector>

#include "kdica/types.hpp"

namespace kdica {

/// Second-layer inputs for direct attribute prediction: the unseen-class
/// signatures and per-attribute priors. Duplicate signatures make the
/// affected classes indistinguishable; they are listed rather than rejected.
struct ZeroShotTable {
  IntMatrix class_signatures;             // Z x A, binary
  Vector priors;                          // length A, in (0, 1)
  std::vector<std::vector<int>> duplicate_groups;  // classes sharing a signature
};

/// Priors default to the column means of the signature table clipped to
/// [0.05, 0.95]; `uniform_priors` switches to a flat 0.5.
ZeroShotTable make_zero_shot_table(const IntMatrix& class_signatures,
                                   bool uniform_priors = false);

struct ZeroShotResult {
  Matrix class_scores;  // T x Z posterior log-scores
  IntVector predicted;  // argmax per row, lowest index on ties
};

/// DAP second layer in log space:
///   score(z|x) = sum_i [a_i^z log p_i + (1-a_i^z) log(1-p_i)]
///              - sum_i [a_i^z log pi_i + (1-a_i^z) log(1-pi_i)]
/// with probabilities clipped to [1e-6, 1-1e-6].
ZeroShotResult dap_zero_shot(const Matrix& probabilities, const ZeroShotTable& table);

}  // namespace kdica
