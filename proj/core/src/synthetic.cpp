#include "kdica/synthetic.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "kdica/rng.hpp"

namespace kdica {

void SynthSpec::validate() const {
  if (num_domains < 2)
    throw ValidationError("need at least 2 domains, got " + std::to_string(num_domains));
  if (train_domains < 1 || train_domains >= num_domains)
    throw ValidationError("train domain count " + std::to_string(train_domains) +
                          " must leave at least one held-out domain");
  if (samples_per_domain < 1) throw ValidationError("samples per domain must be positive");
  if (num_attributes < 1) throw ValidationError("attribute count must be positive");
  if (feature_dim < num_attributes + num_domains)
    throw ValidationError("feature dimension " + std::to_string(feature_dim) +
                          " is below attribute + domain count " +
                          std::to_string(num_attributes + num_domains) +
                          "; the signal and nuisance subspaces cannot be orthogonal");
  if (attribute_signal < 0.0 || domain_nuisance < 0.0 || noise < 0.0)
    throw ValidationError("signal, nuisance and noise strengths must be nonnegative");
  if (attribute_flip < 0.0 || attribute_flip > 0.5)
    throw ValidationError("attribute flip rate must lie in [0, 0.5]");
  if (holdout_flip && (*holdout_flip < 0.0 || *holdout_flip > 0.5))
    throw ValidationError("held-out flip rate must lie in [0, 0.5]");
  if (attribute_correlation < 0.0 || attribute_correlation >= 1.0)
    throw ValidationError("attribute correlation must lie in [0, 1)");
  const bool structured = attribute_flip < 0.5 || effective_holdout_flip() < 0.5;
  if (structured && num_attributes < 63 && (1LL << num_attributes) < num_domains)
    throw ValidationError("2^" + std::to_string(num_attributes) +
                          " signatures cannot cover " + std::to_string(num_domains) +
                          " distinct domains");
}

namespace {

int popcount(std::uint64_t w) {
  int bits = 0;
  for (; w; w >>= 1) bits += static_cast<int>(w & 1ULL);
  return bits;
}

/// Candidate codewords for the held-out domains: weight floor(A/2) with the
/// lowest bit clear, so a word and its complement activate as close to the
/// same number of attributes as possible and never collide.
std::vector<std::uint64_t> balanced_words(int num_attributes, Rng& rng) {
  std::vector<std::uint64_t> reps;
  if (num_attributes <= 16) {
    for (std::uint64_t w = 0; w < (1ULL << num_attributes); w += 2)
      if (popcount(w) == num_attributes / 2) reps.push_back(w);
    rng.shuffle(reps);
    return reps;
  }
  // Too many words to enumerate: place floor(A/2) bits among positions
  // 1..A-1 via a partial shuffle, rejecting duplicates.
  while (reps.size() < 64) {
    std::vector<int> positions(static_cast<std::size_t>(num_attributes - 1));
    for (int i = 1; i < num_attributes; ++i) positions[static_cast<std::size_t>(i - 1)] = i;
    std::uint64_t w = 0;
    for (int k = 0; k < num_attributes / 2; ++k) {
      const auto j = k + static_cast<int>(rng.next_below(positions.size() - static_cast<std::size_t>(k)));
      std::swap(positions[static_cast<std::size_t>(k)], positions[static_cast<std::size_t>(j)]);
      w |= 1ULL << positions[static_cast<std::size_t>(k)];
    }
    if (std::find(reps.begin(), reps.end(), w) == reps.end()) reps.push_back(w);
  }
  return reps;
}

/// Even-parity codewords for the training domains, excluding the held-out
/// words. Even parity keeps the train words at pairwise distance >= 2.
std::vector<std::uint64_t> training_words(int num_attributes, const std::vector<std::uint64_t>& exclude,
                                          int wanted, Rng& rng) {
  std::vector<std::uint64_t> pool;
  auto excluded = [&](std::uint64_t w) {
    return std::find(exclude.begin(), exclude.end(), w) != exclude.end();
  };
  if (num_attributes <= 16) {
    for (std::uint64_t w = 0; w < (1ULL << num_attributes); ++w)
      if (popcount(w) % 2 == 0 && !excluded(w)) pool.push_back(w);
    if (pool.empty())
      for (std::uint64_t w = 0; w < (1ULL << num_attributes); ++w)
        if (!excluded(w)) pool.push_back(w);
    if (pool.empty()) pool.push_back(0);
    rng.shuffle(pool);
    return pool;
  }
  // Draw positions 1..A-1 fair, then set bit 0 to make the parity even;
  // this is uniform over even-parity words.
  while (pool.size() < static_cast<std::size_t>(wanted)) {
    std::uint64_t w = 0;
    int bits = 0;
    for (int a = 1; a < num_attributes; ++a)
      if (rng.next_bernoulli(0.5)) {
        w |= 1ULL << a;
        ++bits;
      }
    if (bits % 2 == 1) w |= 1ULL;
    if (excluded(w) || std::find(pool.begin(), pool.end(), w) != pool.end()) continue;
    pool.push_back(w);
  }
  return pool;
}

/// One signature per domain. Held-out domains cycle over complementary
/// balanced pairs, so consecutive held-out domains differ in every attribute;
/// training domains cycle over the remaining even-parity words.
IntMatrix draw_signatures(int num_domains, int train_domains, int num_attributes, Rng& rng) {
  const std::uint64_t mask =
      num_attributes >= 64 ? ~0ULL : (1ULL << num_attributes) - 1ULL;
  std::vector<std::uint64_t> reps = balanced_words(num_attributes, rng);
  const int num_test = num_domains - train_domains;
  std::vector<std::uint64_t> test_words(static_cast<std::size_t>(num_test));
  for (int t = 0; t < num_test; ++t) {
    std::uint64_t rep = reps[static_cast<std::size_t>(t / 2) % reps.size()];
    test_words[static_cast<std::size_t>(t)] = t % 2 == 0 ? rep : (~rep) & mask;
  }
  std::vector<std::uint64_t> pool =
      training_words(num_attributes, test_words, train_domains, rng);

  IntMatrix out(num_domains, num_attributes);
  for (int y = 0; y < num_domains; ++y) {
    const std::uint64_t w = y < train_domains
                                ? pool[static_cast<std::size_t>(y) % pool.size()]
                                : test_words[static_cast<std::size_t>(y - train_domains)];
    for (int a = 0; a < num_attributes; ++a) out(y, a) = (w >> a) & 1ULL ? 1 : 0;
  }
  return out;
}

}  // namespace

std::pair<Dataset, Dataset> generate(const SynthSpec& spec) {
  spec.validate();
  const int c = spec.num_domains;
  const int a = spec.num_attributes;
  const int d = spec.feature_dim;
  const int n = spec.samples_per_domain;

  // Orthonormal signal and nuisance bases from one QR of a Gaussian block.
  Rng basis_rng = Rng::substream(spec.seed, "synth-basis");
  Matrix gauss(d, a + c);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < a + c; ++j) gauss(i, j) = basis_rng.next_gaussian();
  Eigen::HouseholderQR<Matrix> qr(gauss);
  Matrix basis = qr.householderQ() * Matrix::Identity(d, a + c);
  Matrix w_attr = basis.leftCols(a);
  Matrix w_dom = basis.rightCols(c);

  const bool signatures_matter =
      spec.attribute_flip < 0.5 || spec.effective_holdout_flip() < 0.5;
  Rng sig_rng = Rng::substream(spec.seed, "synth-signatures");
  IntMatrix signatures = signatures_matter
                             ? draw_signatures(c, spec.train_domains, a, sig_rng)
                             : IntMatrix::Zero(c, a);

  const int m = c * n;
  Matrix features(m, d);
  IntMatrix attributes(m, a);
  std::vector<long long> labels(static_cast<std::size_t>(m));

  for (int y = 0; y < c; ++y) {
    Rng rng = Rng::substream(spec.seed, "synth-domain-" + std::to_string(y));
    const double flip =
        y < spec.train_domains ? spec.attribute_flip : spec.effective_holdout_flip();
    for (int s = 0; s < n; ++s) {
      const int row = y * n + s;
      labels[static_cast<std::size_t>(row)] = y;
      for (int j = 0; j < a; ++j) {
        int bit = signatures(y, j);
        if (rng.next_bernoulli(flip)) bit = 1 - bit;
        attributes(row, j) = bit;
      }
      // Optional pairwise agreement: odd coordinates copy their even
      // neighbor. The coin is always drawn so the stream stays aligned.
      for (int j = 1; j < a; j += 2) {
        bool copy = rng.next_bernoulli(spec.attribute_correlation);
        if (copy) attributes(row, j) = attributes(row, j - 1);
      }
      Vector x = spec.attribute_signal * (w_attr * attributes.row(row).transpose().cast<double>());
      x += spec.domain_nuisance * w_dom.col(y);
      for (int i = 0; i < d; ++i) x[i] += spec.noise * rng.next_gaussian();
      features.row(row) = x;
    }
  }

  std::vector<int> train_rows, test_rows;
  for (int row = 0; row < m; ++row)
    (labels[static_cast<std::size_t>(row)] < spec.train_domains ? train_rows : test_rows)
        .push_back(row);

  auto build = [&](const std::vector<int>& rows) {
    Matrix f(static_cast<Eigen::Index>(rows.size()), d);
    IntMatrix at(static_cast<Eigen::Index>(rows.size()), a);
    std::vector<long long> lb(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      f.row(static_cast<Eigen::Index>(i)) = features.row(rows[i]);
      at.row(static_cast<Eigen::Index>(i)) = attributes.row(rows[i]);
      lb[i] = labels[static_cast<std::size_t>(rows[i])];
    }
    return make_dataset(std::move(f), lb, std::move(at), {},
                        signatures_matter ? signatures : IntMatrix());
  };
  return {build(train_rows), build(test_rows)};
}

}  // namespace kdica
