#include "kdica/report.hpp"

#include <cstdio>
#include <fstream>

namespace kdica {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw ValidationError(file.string() + ": cannot open for writing");
  return out;
}

}  // namespace

void write_json(const std::filesystem::path& file, const json& doc) {
  std::ofstream out = open_out(file);
  out << doc.dump(2) << "\n";
  if (!out) throw ValidationError(file.string() + ": write failed");
}

double skipped_ratio(const DetectionResult& result) {
  if (result.attribute_auc.empty()) return 0.0;
  return static_cast<double>(result.skipped_attributes.size()) /
         static_cast<double>(result.attribute_auc.size());
}

void write_detect_report(const std::filesystem::path& dir, const DetectionResult& result,
                         const std::vector<std::string>& attribute_names,
                         const DetectConfig& cfg) {
  auto name_of = [&](int a) {
    return a < static_cast<int>(attribute_names.size())
               ? attribute_names[static_cast<std::size_t>(a)]
               : "attr_" + std::to_string(a);
  };

  json doc;
  doc["mode"] = to_string(result.mode);
  doc["c"] = cfg.c;
  if (result.mode != Mode::raw) {
    doc["b"] = cfg.b;
    doc["gamma"] = result.mode == Mode::udica ? 1.0 : cfg.gamma;
    doc["kernel_family"] = to_string(cfg.family);
    doc["bandwidth"] = cfg.bandwidth;
  }
  doc["normalize"] = cfg.normalize;
  doc["seed"] = cfg.seed;
  doc["svm_epochs"] = cfg.svm_epochs;
  doc["mean_auc"] = result.mean_auc ? json(*result.mean_auc) : json(nullptr);
  doc["skipped_attributes"] = result.skipped_attributes;
  doc["skipped_ratio"] = skipped_ratio(result);
  json attrs = json::array();
  for (std::size_t a = 0; a < result.attribute_auc.size(); ++a) {
    json row;
    row["index"] = a;
    row["name"] = name_of(static_cast<int>(a));
    row["auc"] = result.attribute_auc[a] ? json(*result.attribute_auc[a]) : json(nullptr);
    attrs.push_back(row);
  }
  doc["attributes"] = attrs;
  write_json(dir / "detect_report.json", doc);

  std::ofstream csv = open_out(dir / "detect_report.csv");
  csv << "attribute,name,auc\n";
  for (std::size_t a = 0; a < result.attribute_auc.size(); ++a) {
    csv << a << "," << name_of(static_cast<int>(a)) << ",";
    if (result.attribute_auc[a]) csv << fmt(*result.attribute_auc[a]);
    csv << "\n";
  }
  csv << "mean,,";
  if (result.mean_auc) csv << fmt(*result.mean_auc);
  csv << "\n";
}

void write_cv_report(const std::filesystem::path& dir, const CvResult& result,
                     const ExperimentConfig& cfg) {
  json doc;
  doc["mode"] = to_string(cfg.mode);
  doc["folds_requested"] = cfg.folds;
  doc["folds_used"] = result.folds_used;
  doc["seed"] = cfg.seed;
  doc["chosen"] = {{"c", result.chosen_c}, {"b", result.chosen_b},
                   {"gamma", result.chosen_gamma}};
  doc["warnings"] = result.warnings;
  auto cells = [](const std::vector<CvCell>& v) {
    json arr = json::array();
    for (const auto& cell : v)
      arr.push_back({{"c", cell.c}, {"b", cell.b}, {"gamma", cell.gamma},
                     {"mean_auc", cell.mean_auc}});
    return arr;
  };
  doc["stage_one"] = cells(result.stage_one);
  doc["stage_two"] = cells(result.stage_two);
  write_json(dir / "cv_report.json", doc);

  std::ofstream csv = open_out(dir / "cv_report.csv");
  csv << "stage,c,b,gamma,mean_auc\n";
  for (const auto& cell : result.stage_one)
    csv << "1," << fmt(cell.c) << "," << cell.b << "," << fmt(cell.gamma) << ","
        << fmt(cell.mean_auc) << "\n";
  for (const auto& cell : result.stage_two)
    csv << "2," << fmt(cell.c) << "," << cell.b << "," << fmt(cell.gamma) << ","
        << fmt(cell.mean_auc) << "\n";
}

void write_zeroshot_report(const std::filesystem::path& dir, const ZeroShotResult& result,
                           const ZeroShotTable& table, const IntVector& truth,
                           const std::vector<long long>& class_ids) {
  const int z = static_cast<int>(table.class_signatures.rows());
  std::vector<long long> correct(static_cast<std::size_t>(z), 0);
  std::vector<long long> total(static_cast<std::size_t>(z), 0);
  for (int i = 0; i < truth.size(); ++i) {
    ++total[static_cast<std::size_t>(truth[i])];
    if (result.predicted[i] == truth[i]) ++correct[static_cast<std::size_t>(truth[i])];
  }

  json doc;
  double acc_sum = 0.0;
  int classes_seen = 0;
  json per_class = json::array();
  for (int c = 0; c < z; ++c) {
    json row;
    row["class"] = c < static_cast<int>(class_ids.size())
                       ? class_ids[static_cast<std::size_t>(c)]
                       : static_cast<long long>(c);
    row["samples"] = total[static_cast<std::size_t>(c)];
    if (total[static_cast<std::size_t>(c)] > 0) {
      double acc = static_cast<double>(correct[static_cast<std::size_t>(c)]) /
                   static_cast<double>(total[static_cast<std::size_t>(c)]);
      row["accuracy"] = acc;
      acc_sum += acc;
      ++classes_seen;
    } else {
      row["accuracy"] = nullptr;
    }
    per_class.push_back(row);
  }
  doc["per_class"] = per_class;
  doc["mean_per_class_accuracy"] =
      classes_seen > 0 ? json(acc_sum / classes_seen) : json(nullptr);
  json dups = json::array();
  for (const auto& group : table.duplicate_groups) dups.push_back(group);
  doc["duplicate_signature_groups"] = dups;
  doc["priors"] = std::vector<double>(table.priors.data(),
                                      table.priors.data() + table.priors.size());
  write_json(dir / "zeroshot_report.json", doc);

  std::ofstream csv = open_out(dir / "zeroshot_report.csv");
  csv << "class,samples,accuracy\n";
  for (int c = 0; c < z; ++c) {
    long long id = c < static_cast<int>(class_ids.size())
                       ? class_ids[static_cast<std::size_t>(c)]
                       : static_cast<long long>(c);
    csv << id << "," << total[static_cast<std::size_t>(c)] << ",";
    if (total[static_cast<std::size_t>(c)] > 0)
      csv << fmt(static_cast<double>(correct[static_cast<std::size_t>(c)]) /
                 static_cast<double>(total[static_cast<std::size_t>(c)]));
    csv << "\n";
  }
  csv << "mean,,";
  if (classes_seen > 0) csv << fmt(acc_sum / classes_seen);
  csv << "\n";
}

void write_retrieval_report(const std::filesystem::path& dir, const RetrievalResult& result,
                            const std::vector<int>& query) {
  json doc;
  doc["query"] = query;
  doc["auc"] = result.auc_value ? json(*result.auc_value) : json(nullptr);
  long long relevant = 0;
  for (int i = 0; i < result.relevance.size(); ++i)
    if (result.relevance[i] == 1) ++relevant;
  doc["num_relevant"] = relevant;
  doc["num_images"] = result.relevance.size();
  doc["ranking"] = result.ranking;
  write_json(dir / "retrieval_report.json", doc);

  std::ofstream csv = open_out(dir / "retrieval_report.csv");
  csv << "rank,image,score,relevant\n";
  for (std::size_t r = 0; r < result.ranking.size(); ++r) {
    int img = result.ranking[r];
    csv << (r + 1) << "," << img << "," << fmt(result.scores[img]) << ","
        << result.relevance[img] << "\n";
  }
}

}  // namespace kdica
