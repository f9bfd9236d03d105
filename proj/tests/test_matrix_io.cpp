#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "kdica/matrix_io.hpp"
#include "kdica/rng.hpp"
#include "kdica/types.hpp"

using kdica::Matrix;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("kdica_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  kdica::Rng rng(seed);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.next_gaussian();
  return m;
}

}  // namespace

TEST_CASE("csv round trip is exact") {
  const fs::path dir = temp_dir("csv");
  const Matrix m = random_matrix(7, 3, 1);
  kdica::write_csv_matrix(dir / "m.csv", m);
  const Matrix back = kdica::read_csv_matrix(dir / "m.csv");
  REQUIRE(back.rows() == m.rows());
  REQUIRE(back.cols() == m.cols());
  CHECK(back.isApprox(m, 0.0));  // 17 significant digits restore the doubles
}

TEST_CASE("csv handles awkward values") {
  const fs::path dir = temp_dir("csv_edge");
  Matrix m(2, 3);
  m << 0.0, -0.0, 1e-300, -1.5e300, 0.1, -3.0;
  kdica::write_csv_matrix(dir / "m.csv", m);
  const Matrix back = kdica::read_csv_matrix(dir / "m.csv");
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) CHECK(back(i, j) == m(i, j));
}

TEST_CASE("kdmx round trip is bitwise") {
  const fs::path dir = temp_dir("kdmx");
  const Matrix m = random_matrix(5, 9, 2);
  kdica::write_kdmx(dir / "m.kdmx", m);
  const Matrix back = kdica::read_kdmx(dir / "m.kdmx");
  REQUIRE(back.rows() == 5);
  REQUIRE(back.cols() == 9);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 9; ++j)
      CHECK(std::memcmp(&back(i, j), &m(i, j), sizeof(double)) == 0);
}

TEST_CASE("kdmx layout matches the documented bytes") {
  const fs::path dir = temp_dir("kdmx_bytes");
  // Hand-build a 1x2 file: magic, u32 dims, row-major little-endian doubles.
  std::vector<unsigned char> bytes;
  const char magic[4] = {'K', 'D', 'M', 'X'};
  bytes.insert(bytes.end(), magic, magic + 4);
  const std::uint32_t rows = 1, cols = 2;
  const double payload[2] = {1.5, -2.25};
  auto append = [&](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    bytes.insert(bytes.end(), b, b + n);
  };
  append(&rows, 4);
  append(&cols, 4);
  append(payload, 16);

  const fs::path file = dir / "hand.kdmx";
  std::ofstream out(file, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.close();

  const Matrix m = kdica::read_kdmx(file);
  REQUIRE(m.rows() == 1);
  REQUIRE(m.cols() == 2);
  CHECK(m(0, 0) == 1.5);
  CHECK(m(0, 1) == -2.25);

  // And the writer produces the same bytes back.
  kdica::write_kdmx(dir / "rewrite.kdmx", m);
  std::ifstream in(dir / "rewrite.kdmx", std::ios::binary);
  std::vector<unsigned char> written((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
  CHECK(written == bytes);
}

TEST_CASE("kdmx rejects a wrong magic") {
  const fs::path dir = temp_dir("kdmx_magic");
  const fs::path file = dir / "bad.kdmx";
  std::ofstream out(file, std::ios::binary);
  out << "NOPE then some trailing junk";
  out.close();
  CHECK_THROWS_AS(kdica::read_kdmx(file), kdica::ValidationError);
}

TEST_CASE("labels round trip") {
  const fs::path dir = temp_dir("labels");
  const std::vector<long long> labels{0, 5, -3, 12345678901LL, 0};
  kdica::write_labels(dir / "l.txt", labels);
  CHECK(kdica::read_labels(dir / "l.txt") == labels);
}

TEST_CASE("format dispatch routes to the right codec") {
  const fs::path dir = temp_dir("dispatch");
  const Matrix m = random_matrix(3, 4, 3);
  kdica::write_matrix(dir / "a.csv", m, "csv");
  kdica::write_matrix(dir / "a.kdmx", m, "kdmx");
  CHECK(kdica::read_matrix(dir / "a.csv", "csv").isApprox(m, 0.0));
  CHECK(kdica::read_matrix(dir / "a.kdmx", "kdmx").isApprox(m, 0.0));
  CHECK_THROWS_AS(kdica::write_matrix(dir / "a.xyz", m, "xyz"), kdica::ValidationError);
}

TEST_CASE("missing files raise validation errors") {
  const fs::path dir = temp_dir("missing");
  CHECK_THROWS_AS(kdica::read_csv_matrix(dir / "nope.csv"), kdica::ValidationError);
  CHECK_THROWS_AS(kdica::read_kdmx(dir / "nope.kdmx"), kdica::ValidationError);
  CHECK_THROWS_AS(kdica::read_labels(dir / "nope.txt"), kdica::ValidationError);
}
