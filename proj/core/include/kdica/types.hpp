#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace kdica {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;
using IntVector = Eigen::VectorXi;

/// Invalid input data or shapes (bad manifests, non-binary attributes,
/// overlapping splits, dimension mismatches).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& message) : std::runtime_error(message) {}
};

/// Failures of numerical routines (factorizations, solvers).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace kdica
