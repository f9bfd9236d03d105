#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kdica/types.hpp"

namespace kdica {

/// CSV: one sample per line, comma-separated decimal fields. Values are
/// written with 17 significant digits, so save/load round trips are exact.
Matrix read_csv_matrix(const std::filesystem::path& file);
void write_csv_matrix(const std::filesystem::path& file, const Matrix& m);

/// KDMX: magic bytes "KDMX", u32 rows, u32 cols, then row-major f64 payload,
/// all little-endian.
Matrix read_kdmx(const std::filesystem::path& file);
void write_kdmx(const std::filesystem::path& file, const Matrix& m);

/// Labels: one integer per line, UTF-8 text.
std::vector<long long> read_labels(const std::filesystem::path& file);
void write_labels(const std::filesystem::path& file, const std::vector<long long>& labels);

/// Dispatch on format "csv" or "kdmx".
Matrix read_matrix(const std::filesystem::path& file, const std::string& format);
void write_matrix(const std::filesystem::path& file, const Matrix& m, const std::string& format);

}  // namespace kdica
