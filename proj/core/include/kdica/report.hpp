#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "kdica/pipeline.hpp"
#include "kdica/retrieval.hpp"
#include "kdica/zero_shot.hpp"

namespace kdica {

/// Dumps with a stable layout (sorted keys, two-space indent, trailing
/// newline). Reports carry no timestamps or machine state, so identical runs
/// produce identical bytes.
void write_json(const std::filesystem::path& file, const nlohmann::json& doc);

/// detect_report.json + detect_report.csv (per-attribute AUC table).
void write_detect_report(const std::filesystem::path& dir, const DetectionResult& result,
                         const std::vector<std::string>& attribute_names,
                         const DetectConfig& cfg);

/// cv_report.json + cv_report.csv (per-cell mean AUC).
void write_cv_report(const std::filesystem::path& dir, const CvResult& result,
                     const ExperimentConfig& cfg);

/// zeroshot_report.json + zeroshot_report.csv (per-class accuracy).
void write_zeroshot_report(const std::filesystem::path& dir, const ZeroShotResult& result,
                           const ZeroShotTable& table, const IntVector& truth,
                           const std::vector<long long>& class_ids);

/// retrieval_report.json + retrieval_report.csv (ranked list).
void write_retrieval_report(const std::filesystem::path& dir, const RetrievalResult& result,
                            const std::vector<int>& query);

/// Fraction of attributes whose detectors were skipped as degenerate.
double skipped_ratio(const DetectionResult& result);

}  // namespace kdica
