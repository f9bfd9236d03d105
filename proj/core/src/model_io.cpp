#include "kdica/model_io.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace kdica {

namespace {

using nlohmann::json;

constexpr std::uint32_t kFormatVersion = 1;

[[noreturn]] void fail(const std::filesystem::path& file, const std::string& what) {
  throw ValidationError(file.string() + ": " + what);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                           static_cast<char>((v >> 16) & 0xff),
                           static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), b.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), b.size());
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), b.size());
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

void put_block(std::ostream& out, const Matrix& m) {
  out.write("KDMX", 4);
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::uint64_t bits;
      double v = m(i, j);
      std::memcpy(&bits, &v, sizeof(bits));
      put_u64(out, bits);
    }
}

Matrix get_block(std::istream& in, const std::filesystem::path& file, const std::string& name) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || std::memcmp(magic.data(), "KDMX", 4) != 0)
    fail(file, "bad block magic for \"" + name + "\"");
  const std::uint32_t rows = get_u32(in);
  const std::uint32_t cols = get_u32(in);
  Matrix m(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j) {
      std::uint64_t bits = get_u64(in);
      double v;
      std::memcpy(&v, &bits, sizeof(v));
      m(i, j) = v;
    }
  if (!in) fail(file, "truncated block \"" + name + "\"");
  return m;
}

}  // namespace

void save_model(const std::filesystem::path& file, const ModelBundle& bundle) {
  json header;
  header["format"] = "kdmc";
  header["version"] = kFormatVersion;
  header["mode"] = to_string(bundle.mode);
  header["l2_normalized"] = bundle.l2_normalized;

  std::vector<std::string> blocks;
  if (bundle.mode != Mode::raw) {
    if (bundle.model.projection.size() == 0)
      throw ValidationError("bundle mode " + to_string(bundle.mode) +
                            " requires a fitted projection");
    json m;
    m["gamma"] = bundle.model.gamma;
    m["epsilon_used"] = bundle.model.epsilon_used;
    m["kernel_family"] = to_string(bundle.model.train_stats.family);
    m["bandwidth"] = bundle.model.train_stats.bandwidth;
    m["grand_mean"] = bundle.model.train_stats.raw_grand_mean;
    header["model"] = m;
    blocks.insert(blocks.end(),
                  {"projection", "eigenvalues", "column_means", "train_features"});
  }
  if (bundle.bank) {
    json b;
    b["c"] = bundle.svm_c;
    b["epochs"] = bundle.svm_epochs;
    json dets = json::array();
    for (const auto& det : bundle.bank->detectors) {
      json d;
      d["skipped"] = det.skipped;
      d["bias"] = det.svm.bias;
      d["slope"] = det.calibrator.slope;
      d["intercept"] = det.calibrator.intercept;
      dets.push_back(d);
    }
    b["detectors"] = dets;
    header["bank"] = b;
    blocks.push_back("bank_weights");
  }
  header["blocks"] = blocks;

  const std::string header_text = header.dump();
  std::ofstream out(file, std::ios::binary);
  if (!out) fail(file, "cannot open for writing");
  out.write("KDMC", 4);
  put_u32(out, kFormatVersion);
  put_u64(out, header_text.size());
  out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));

  for (const std::string& name : blocks) {
    if (name == "projection") put_block(out, bundle.model.projection);
    else if (name == "eigenvalues") put_block(out, bundle.model.eigenvalues);
    else if (name == "column_means") put_block(out, bundle.model.train_stats.raw_column_means);
    else if (name == "train_features") put_block(out, bundle.model.train_features);
    else if (name == "bank_weights") {
      const auto& dets = bundle.bank->detectors;
      Eigen::Index dim = 0;
      for (const auto& det : dets)
        if (!det.skipped) dim = det.svm.weights.size();
      Matrix w = Matrix::Zero(static_cast<Eigen::Index>(dets.size()), dim);
      for (std::size_t i = 0; i < dets.size(); ++i)
        if (!dets[i].skipped)
          w.row(static_cast<Eigen::Index>(i)) = dets[i].svm.weights.transpose();
      put_block(out, w);
    }
  }
  if (!out) fail(file, "write failed");
}

ModelBundle load_model(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(file, "cannot open for reading");
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || std::memcmp(magic.data(), "KDMC", 4) != 0) fail(file, "bad container magic bytes");
  const std::uint32_t version = get_u32(in);
  if (version != kFormatVersion)
    fail(file, "unsupported container version " + std::to_string(version));
  const std::uint64_t header_len = get_u64(in);
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), static_cast<std::streamsize>(header_len));
  if (!in) fail(file, "truncated header");

  json header;
  try {
    header = json::parse(header_text);
  } catch (const json::parse_error& e) {
    fail(file, std::string("header: ") + e.what());
  }

  ModelBundle bundle;
  bundle.mode = mode_from_string(header.at("mode").get<std::string>());
  bundle.l2_normalized = header.value("l2_normalized", true);

  std::map<std::string, Matrix> block_data;
  for (const auto& name : header.at("blocks"))
    block_data[name.get<std::string>()] = get_block(in, file, name.get<std::string>());

  if (bundle.mode != Mode::raw) {
    const json& m = header.at("model");
    bundle.model.gamma = m.at("gamma").get<double>();
    bundle.model.epsilon_used = m.at("epsilon_used").get<double>();
    bundle.model.train_stats.family =
        kernel_family_from_string(m.at("kernel_family").get<std::string>());
    bundle.model.train_stats.bandwidth = m.at("bandwidth").get<double>();
    bundle.model.train_stats.raw_grand_mean = m.at("grand_mean").get<double>();
    bundle.model.train_stats.centered = true;
    bundle.model.l2_normalized = bundle.l2_normalized;
    auto need = [&](const std::string& name) -> Matrix& {
      auto it = block_data.find(name);
      if (it == block_data.end()) fail(file, "missing block \"" + name + "\"");
      return it->second;
    };
    bundle.model.projection = std::move(need("projection"));
    bundle.model.eigenvalues = std::move(need("eigenvalues"));
    bundle.model.train_stats.raw_column_means = std::move(need("column_means"));
    bundle.model.train_features = std::move(need("train_features"));
    if (bundle.model.train_stats.raw_column_means.size() != bundle.model.train_features.rows())
      fail(file, "centering statistics do not match the stored training set");
  }

  if (header.contains("bank")) {
    const json& b = header.at("bank");
    bundle.svm_c = b.at("c").get<double>();
    bundle.svm_epochs = b.at("epochs").get<int>();
    auto it = block_data.find("bank_weights");
    if (it == block_data.end()) fail(file, "missing block \"bank_weights\"");
    const Matrix& w = it->second;
    DetectorBank bank;
    const json& dets = b.at("detectors");
    if (static_cast<Eigen::Index>(dets.size()) != w.rows())
      fail(file, "detector count does not match weight rows");
    for (std::size_t i = 0; i < dets.size(); ++i) {
      AttributeDetector det;
      det.skipped = dets[i].at("skipped").get<bool>();
      det.svm.bias = dets[i].at("bias").get<double>();
      det.svm.c = bundle.svm_c;
      det.svm.epochs = bundle.svm_epochs;
      det.svm.weights = w.row(static_cast<Eigen::Index>(i)).transpose();
      det.calibrator.slope = dets[i].at("slope").get<double>();
      det.calibrator.intercept = dets[i].at("intercept").get<double>();
      bank.detectors.push_back(std::move(det));
    }
    bundle.bank = std::move(bank);
  }
  return bundle;
}

Matrix apply_model(const ModelBundle& bundle, const Matrix& features) {
  Matrix x = bundle.l2_normalized ? l2_normalize(features) : features;
  if (bundle.mode == Mode::raw) return x;
  return transform(bundle.model, x);
}

}  // namespace kdica
