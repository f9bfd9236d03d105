#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kdica/types.hpp"

namespace kdica {

/// Dense features plus per-sample category (domain) labels and binary
/// attribute annotations. Domain labels are contiguous 0..C-1 after loading;
/// the original ids are kept so reports can reference them.
struct Dataset {
  Matrix features;                            // M x D
  IntVector domain_labels;                    // M entries in [0, C)
  IntMatrix attributes;                       // M x A, entries 0/1
  std::vector<std::string> attribute_names;   // A
  IntMatrix class_signatures;                 // C x A when known, else 0 x 0
  std::vector<long long> original_class_ids;  // size C, contiguous id -> original id

  int num_samples() const { return static_cast<int>(features.rows()); }
  int num_features() const { return static_cast<int>(features.cols()); }
  int num_attributes() const { return static_cast<int>(attributes.cols()); }
  int num_classes() const { return static_cast<int>(original_class_ids.size()); }
  bool has_class_signatures() const { return class_signatures.size() > 0; }

  /// Enforces the shape/label/attribute invariants; throws ValidationError.
  void validate() const;
};

/// Class-disjoint split. Ids refer to the contiguous ids of the dataset
/// being split.
struct SplitSpec {
  std::set<int> train_classes;
  std::set<int> test_classes;
  std::uint64_t seed = 0;
};

/// Builds a validated Dataset from raw parts. Labels are remapped to
/// contiguous ids (ascending original order). `signatures_by_original_id`,
/// when non-empty, is indexed by original label value and also fills in the
/// attribute matrix when `attributes` is empty (class-level annotation).
Dataset make_dataset(Matrix features, const std::vector<long long>& raw_labels,
                     IntMatrix attributes, std::vector<std::string> attribute_names,
                     const IntMatrix& signatures_by_original_id);

/// Loads a dataset described by a JSON manifest with fields
/// {features, labels, attributes?, class_signatures?, attribute_names?, format}.
/// Relative paths resolve against the manifest's directory.
Dataset load_dataset(const std::filesystem::path& manifest_path);

/// Writes matrices, labels and a manifest.json into `dir`.
void save_dataset(const Dataset& ds, const std::filesystem::path& dir,
                  const std::string& format = "csv");

/// Row-wise unit norm; all-zero rows stay zero.
Matrix l2_normalize(const Matrix& features);

/// Row subset as a dataset of its own. Classes are renumbered contiguously
/// (ascending by current id) and signatures filtered to the classes present.
Dataset take_rows(const Dataset& ds, const std::vector<int>& rows);

std::pair<Dataset, Dataset> split_by_classes(const Dataset& ds, const SplitSpec& spec);

/// Uniform class split without replacement: `num_train_classes` classes go to
/// train, the rest to test.
SplitSpec random_split_spec(int num_classes, int num_train_classes, std::uint64_t seed);

}  // namespace kdica
