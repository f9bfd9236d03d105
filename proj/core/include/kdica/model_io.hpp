#pragma once

#include <filesystem>
#include <optional>

#include "kdica/detector_bank.hpp"
#include "kdica/kdica.hpp"
#include "kdica/pipeline.hpp"

namespace kdica {

/// Everything a saved run needs to score new data: the projection model (for
/// kdica/udica modes) and, when detectors were trained, the attribute bank.
struct ModelBundle {
  Mode mode = Mode::kdica;
  bool l2_normalized = true;
  KdicaModel model;                  // unused in raw mode
  std::optional<DetectorBank> bank;  // present after detect-style training
  double svm_c = 1.0;
  int svm_epochs = 200;
};

/// Single-file container: "KDMC" magic, format version, JSON header with the
/// scalar state, then named KDMX blocks for the matrices.
void save_model(const std::filesystem::path& file, const ModelBundle& bundle);
ModelBundle load_model(const std::filesystem::path& file);

/// Embeds features with a loaded bundle: l2-normalizes when the bundle says
/// so, then applies the projection (identity for raw mode).
Matrix apply_model(const ModelBundle& bundle, const Matrix& features);

}  // namespace kdica
