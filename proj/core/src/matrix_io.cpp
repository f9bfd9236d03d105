#include "kdica/matrix_io.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace kdica {

namespace {

[[noreturn]] void fail(const std::filesystem::path& file, const std::string& what) {
  throw ValidationError(file.string() + ": " + what);
}

std::ifstream open_in(const std::filesystem::path& file, bool binary) {
  std::ifstream in(file, binary ? std::ios::binary : std::ios::in);
  if (!in) fail(file, "cannot open for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& file, bool binary) {
  std::ofstream out(file, binary ? std::ios::binary : std::ios::out);
  if (!out) fail(file, "cannot open for writing");
  return out;
}

double parse_double(std::string_view field, const std::filesystem::path& file, std::size_t line) {
  // Trim spaces and a possible trailing CR.
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() &&
         (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
    field.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    fail(file, "line " + std::to_string(line) + ": cannot parse value '" + std::string(field) + "'");
  return value;
}

void put_u32_le(std::ofstream& out, std::uint32_t v) {
  const std::array<char, 4> bytes = {
      static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
      static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes.data(), bytes.size());
}

std::uint32_t get_u32_le(std::ifstream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), b.size());
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64_le(std::ofstream& out, double value) {
  std::uint64_t bits;
  std::memcpy(&bits, &value, sizeof(bits));
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

}  // namespace

Matrix read_csv_matrix(const std::filesystem::path& file) {
  std::ifstream in = open_in(file, false);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t comma = line.find(',', start);
      const std::size_t end = comma == std::string::npos ? line.size() : comma;
      row.push_back(parse_double({line.data() + start, end - start}, file, line_no));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      fail(file, "line " + std::to_string(line_no) + ": expected " +
                     std::to_string(rows.front().size()) + " columns, got " +
                     std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(file, "empty matrix file");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

void write_csv_matrix(const std::filesystem::path& file, const Matrix& m) {
  std::ofstream out = open_out(file, false);
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j > 0) out.put(',');
      out << buf;
    }
    out.put('\n');
  }
  if (!out) fail(file, "write failed");
}

Matrix read_kdmx(const std::filesystem::path& file) {
  std::ifstream in = open_in(file, true);
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || std::memcmp(magic.data(), "KDMX", 4) != 0) fail(file, "bad KDMX magic bytes");
  const std::uint32_t rows = get_u32_le(in);
  const std::uint32_t cols = get_u32_le(in);
  if (!in) fail(file, "truncated KDMX header");
  Matrix m(rows, cols);
  std::vector<unsigned char> payload(static_cast<std::size_t>(rows) * cols * 8);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (!in) fail(file, "truncated KDMX payload");
  std::size_t offset = 0;
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) {
      std::uint64_t bits = 0;
      for (int k = 0; k < 8; ++k)
        bits |= static_cast<std::uint64_t>(payload[offset + static_cast<std::size_t>(k)]) << (8 * k);
      offset += 8;
      double value;
      std::memcpy(&value, &bits, sizeof(value));
      m(i, j) = value;
    }
  }
  return m;
}

void write_kdmx(const std::filesystem::path& file, const Matrix& m) {
  std::ofstream out = open_out(file, true);
  out.write("KDMX", 4);
  put_u32_le(out, static_cast<std::uint32_t>(m.rows()));
  put_u32_le(out, static_cast<std::uint32_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) put_f64_le(out, m(i, j));
  if (!out) fail(file, "write failed");
}

std::vector<long long> read_labels(const std::filesystem::path& file) {
  std::ifstream in = open_in(file, false);
  std::vector<long long> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view field = line;
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.remove_suffix(1);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    if (field.empty()) continue;
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
      fail(file, "line " + std::to_string(line_no) + ": cannot parse label '" +
                     std::string(field) + "'");
    labels.push_back(value);
  }
  if (labels.empty()) fail(file, "empty labels file");
  return labels;
}

void write_labels(const std::filesystem::path& file, const std::vector<long long>& labels) {
  std::ofstream out = open_out(file, false);
  for (const long long v : labels) out << v << '\n';
  if (!out) fail(file, "write failed");
}

Matrix read_matrix(const std::filesystem::path& file, const std::string& format) {
  if (format == "csv") return read_csv_matrix(file);
  if (format == "kdmx") return read_kdmx(file);
  throw ValidationError("unknown matrix format '" + format + "' (expected csv or kdmx)");
}

void write_matrix(const std::filesystem::path& file, const Matrix& m, const std::string& format) {
  if (format == "csv") {
    write_csv_matrix(file, m);
  } else if (format == "kdmx") {
    write_kdmx(file, m);
  } else {
    throw ValidationError("unknown matrix format '" + format + "' (expected csv or kdmx)");
  }
}

}  // namespace kdica
