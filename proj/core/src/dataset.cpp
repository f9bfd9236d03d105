#include "kdica/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "kdica/matrix_io.hpp"
#include "kdica/rng.hpp"

namespace kdica {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& msg) { throw ValidationError(msg); }

void check_binary(const IntMatrix& m, const std::string& what) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0 && m(i, j) != 1)
        invalid("non-binary " + what + " value " + std::to_string(m(i, j)) +
                " at row " + std::to_string(i) + ", column " + std::to_string(j));
}

IntMatrix to_int_matrix(const Matrix& m, const std::string& what) {
  IntMatrix out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      double v = m(i, j);
      if (v != 0.0 && v != 1.0)
        invalid("non-binary " + what + " value at row " + std::to_string(i) +
                ", column " + std::to_string(j));
      out(i, j) = v == 1.0 ? 1 : 0;
    }
  return out;
}

}  // namespace

void Dataset::validate() const {
  const int m = num_samples();
  if (m == 0) invalid("dataset has no samples");
  if (num_features() == 0) invalid("dataset has no feature columns");
  if (domain_labels.size() != m)
    invalid("label count " + std::to_string(domain_labels.size()) +
            " does not match sample count " + std::to_string(m));
  if (attributes.rows() != m)
    invalid("attribute row count " + std::to_string(attributes.rows()) +
            " does not match sample count " + std::to_string(m));
  const int c = num_classes();
  if (c == 0) invalid("dataset has no classes");
  for (int i = 0; i < m; ++i)
    if (domain_labels[i] < 0 || domain_labels[i] >= c)
      invalid("domain label " + std::to_string(domain_labels[i]) + " at row " +
              std::to_string(i) + " outside [0, " + std::to_string(c) + ")");
  check_binary(attributes, "attribute");
  if (!attribute_names.empty() &&
      static_cast<int>(attribute_names.size()) != num_attributes())
    invalid("attribute name count " + std::to_string(attribute_names.size()) +
            " does not match attribute count " + std::to_string(num_attributes()));
  if (has_class_signatures()) {
    if (class_signatures.rows() != c)
      invalid("class signature row count " + std::to_string(class_signatures.rows()) +
              " does not match class count " + std::to_string(c));
    if (class_signatures.cols() != num_attributes())
      invalid("class signature column count does not match attribute count");
    check_binary(class_signatures, "class signature");
  }
  if (!features.allFinite()) invalid("features contain NaN or infinity");
}

Dataset make_dataset(Matrix features, const std::vector<long long>& raw_labels,
                     IntMatrix attributes, std::vector<std::string> attribute_names,
                     const IntMatrix& signatures_by_original_id) {
  if (static_cast<Eigen::Index>(raw_labels.size()) != features.rows())
    invalid("label count " + std::to_string(raw_labels.size()) +
            " does not match feature row count " + std::to_string(features.rows()));

  // Remap raw labels to contiguous ids in ascending original order.
  std::vector<long long> uniq(raw_labels);
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  std::map<long long, int> remap;
  for (std::size_t i = 0; i < uniq.size(); ++i) remap[uniq[i]] = static_cast<int>(i);

  Dataset ds;
  ds.features = std::move(features);
  ds.domain_labels.resize(static_cast<Eigen::Index>(raw_labels.size()));
  for (std::size_t i = 0; i < raw_labels.size(); ++i)
    ds.domain_labels[static_cast<Eigen::Index>(i)] = remap[raw_labels[i]];
  ds.original_class_ids = uniq;
  ds.attribute_names = std::move(attribute_names);

  if (signatures_by_original_id.size() > 0) {
    // Keep only the signature rows of classes that actually occur.
    const int c = static_cast<int>(uniq.size());
    ds.class_signatures.resize(c, signatures_by_original_id.cols());
    for (int y = 0; y < c; ++y) {
      long long orig = uniq[static_cast<std::size_t>(y)];
      if (orig < 0 || orig >= signatures_by_original_id.rows())
        invalid("class id " + std::to_string(orig) +
                " has no row in the class signature table");
      ds.class_signatures.row(y) = signatures_by_original_id.row(static_cast<Eigen::Index>(orig));
    }
    if (attributes.size() == 0) {
      // Class-level annotation: every sample inherits its class signature.
      attributes.resize(ds.features.rows(), ds.class_signatures.cols());
      for (int i = 0; i < attributes.rows(); ++i)
        attributes.row(i) = ds.class_signatures.row(ds.domain_labels[i]);
    }
  } else if (attributes.size() == 0) {
    invalid("dataset needs per-sample attributes or a class signature table");
  }
  ds.attributes = std::move(attributes);
  ds.validate();
  return ds;
}

Dataset load_dataset(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) invalid("cannot open manifest " + manifest_path.string());
  json manifest;
  try {
    in >> manifest;
  } catch (const json::parse_error& e) {
    invalid("manifest " + manifest_path.string() + ": " + e.what());
  }
  if (!manifest.is_object()) invalid("manifest " + manifest_path.string() + " is not a JSON object");
  for (const char* key : {"features", "labels"})
    if (!manifest.contains(key))
      invalid("manifest " + manifest_path.string() + " is missing \"" + key + "\"");

  const auto base = manifest_path.parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };
  const std::string format = manifest.value("format", std::string("csv"));
  if (format != "csv" && format != "kdmx")
    invalid("manifest format \"" + format + "\" is not csv or kdmx");

  Matrix features = read_matrix(resolve(manifest.at("features").get<std::string>()), format);
  std::vector<long long> labels = read_labels(resolve(manifest.at("labels").get<std::string>()));

  IntMatrix attributes;
  if (manifest.contains("attributes"))
    attributes = to_int_matrix(
        read_matrix(resolve(manifest.at("attributes").get<std::string>()), format),
        "attribute");

  IntMatrix signatures;
  if (manifest.contains("class_signatures"))
    signatures = to_int_matrix(
        read_matrix(resolve(manifest.at("class_signatures").get<std::string>()), format),
        "class signature");

  if (attributes.size() == 0 && signatures.size() == 0)
    invalid("manifest " + manifest_path.string() +
            " provides neither \"attributes\" nor \"class_signatures\"");

  std::vector<std::string> names;
  if (manifest.contains("attribute_names")) {
    if (!manifest.at("attribute_names").is_array())
      invalid("manifest \"attribute_names\" must be an array of strings");
    for (const auto& n : manifest.at("attribute_names")) names.push_back(n.get<std::string>());
  }

  return make_dataset(std::move(features), labels, std::move(attributes),
                      std::move(names), signatures);
}

void save_dataset(const Dataset& ds, const std::filesystem::path& dir,
                  const std::string& format) {
  if (format != "csv" && format != "kdmx")
    invalid("format \"" + format + "\" is not csv or kdmx");
  ds.validate();
  std::filesystem::create_directories(dir);
  const std::string ext = "." + format;

  write_matrix(dir / ("features" + ext), ds.features, format);

  // Labels are written as original ids so a load round-trips.
  std::vector<long long> labels(static_cast<std::size_t>(ds.num_samples()));
  for (int i = 0; i < ds.num_samples(); ++i)
    labels[static_cast<std::size_t>(i)] =
        ds.original_class_ids[static_cast<std::size_t>(ds.domain_labels[i])];
  write_labels(dir / "labels.txt", labels);

  write_matrix(dir / ("attributes" + ext), ds.attributes.cast<double>(), format);

  nlohmann::json manifest;
  manifest["format"] = format;
  manifest["features"] = "features" + ext;
  manifest["labels"] = "labels.txt";
  manifest["attributes"] = "attributes" + ext;
  if (ds.has_class_signatures()) {
    // Signature rows are keyed by original id on disk.
    long long max_id = *std::max_element(ds.original_class_ids.begin(),
                                         ds.original_class_ids.end());
    IntMatrix table = IntMatrix::Zero(static_cast<Eigen::Index>(max_id + 1),
                                      ds.class_signatures.cols());
    for (int y = 0; y < ds.num_classes(); ++y)
      table.row(static_cast<Eigen::Index>(ds.original_class_ids[static_cast<std::size_t>(y)])) =
          ds.class_signatures.row(y);
    write_matrix(dir / ("class_signatures" + ext), table.cast<double>(), format);
    manifest["class_signatures"] = "class_signatures" + ext;
  }
  if (!ds.attribute_names.empty()) manifest["attribute_names"] = ds.attribute_names;

  std::ofstream out(dir / "manifest.json");
  if (!out) invalid("cannot write manifest in " + dir.string());
  out << manifest.dump(2) << "\n";
}

Matrix l2_normalize(const Matrix& features) {
  Matrix out = features;
  for (int i = 0; i < out.rows(); ++i) {
    double n = out.row(i).norm();
    if (n > 0.0) out.row(i) /= n;
  }
  return out;
}

Dataset take_rows(const Dataset& ds, const std::vector<int>& rows) {
  if (rows.empty()) invalid("row selection is empty");
  std::set<int> classes;
  for (int r : rows) {
    if (r < 0 || r >= ds.num_samples())
      invalid("row index " + std::to_string(r) + " outside [0, " +
              std::to_string(ds.num_samples()) + ")");
    classes.insert(ds.domain_labels[r]);
  }

  // Classes present in the subset are renumbered contiguously, ascending.
  std::map<int, int> remap;
  for (int c : classes) remap[c] = static_cast<int>(remap.size());

  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), ds.features.cols());
  out.domain_labels.resize(static_cast<Eigen::Index>(rows.size()));
  out.attributes.resize(static_cast<Eigen::Index>(rows.size()), ds.attributes.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = ds.features.row(rows[i]);
    out.domain_labels[static_cast<Eigen::Index>(i)] = remap[ds.domain_labels[rows[i]]];
    out.attributes.row(static_cast<Eigen::Index>(i)) = ds.attributes.row(rows[i]);
  }
  out.attribute_names = ds.attribute_names;
  for (int c : classes)
    out.original_class_ids.push_back(ds.original_class_ids[static_cast<std::size_t>(c)]);
  if (ds.has_class_signatures()) {
    out.class_signatures.resize(static_cast<Eigen::Index>(classes.size()),
                                ds.class_signatures.cols());
    int r = 0;
    for (int c : classes) out.class_signatures.row(r++) = ds.class_signatures.row(c);
  }
  out.validate();
  return out;
}

namespace {

Dataset take_classes(const Dataset& ds, const std::set<int>& classes) {
  std::vector<int> rows;
  for (int i = 0; i < ds.num_samples(); ++i)
    if (classes.count(ds.domain_labels[i])) rows.push_back(i);
  if (rows.empty()) invalid("class split selects no samples");
  return take_rows(ds, rows);
}

}  // namespace

std::pair<Dataset, Dataset> split_by_classes(const Dataset& ds, const SplitSpec& spec) {
  if (spec.train_classes.empty()) invalid("split has no train classes");
  if (spec.test_classes.empty()) invalid("split has no test classes");
  for (int c : spec.train_classes)
    if (spec.test_classes.count(c))
      invalid("class " + std::to_string(c) + " appears in both train and test");
  auto check_range = [&](int c) {
    if (c < 0 || c >= ds.num_classes())
      invalid("split class " + std::to_string(c) + " outside [0, " +
              std::to_string(ds.num_classes()) + ")");
  };
  for (int c : spec.train_classes) check_range(c);
  for (int c : spec.test_classes) check_range(c);
  return {take_classes(ds, spec.train_classes), take_classes(ds, spec.test_classes)};
}

SplitSpec random_split_spec(int num_classes, int num_train_classes, std::uint64_t seed) {
  if (num_train_classes <= 0 || num_train_classes >= num_classes)
    invalid("train class count " + std::to_string(num_train_classes) +
            " must lie strictly between 0 and " + std::to_string(num_classes));
  std::vector<int> ids(static_cast<std::size_t>(num_classes));
  for (int i = 0; i < num_classes; ++i) ids[static_cast<std::size_t>(i)] = i;
  Rng rng = Rng::substream(seed, "class-split");
  rng.shuffle(ids);
  SplitSpec spec;
  spec.seed = seed;
  for (int i = 0; i < num_train_classes; ++i) spec.train_classes.insert(ids[static_cast<std::size_t>(i)]);
  for (int i = num_train_classes; i < num_classes; ++i) spec.test_classes.insert(ids[static_cast<std::size_t>(i)]);
  return spec;
}

}  // namespace kdica
