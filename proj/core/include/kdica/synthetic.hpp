#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "kdica/dataset.hpp"
#include "kdica/types.hpp"

namespace kdica {

/// Multi-domain attribute data: x = s_a W_a a + s_d W_d e_y + sigma_n noise,
/// with W_a and W_d spanning orthogonal subspaces. Attribute and category
/// structure therefore cross each other, which is exactly the regime the
/// projection is meant to handle.
struct SynthSpec {
  int num_domains = 8;        // total, train + held-out
  int train_domains = 6;      // leading domains go to train, the rest to test
  int samples_per_domain = 40;
  int num_attributes = 4;
  int feature_dim = 20;       // must be >= num_attributes + num_domains
  double attribute_signal = 1.0;   // s_a
  double domain_nuisance = 2.0;    // s_d
  double noise = 0.5;              // sigma_n
  double attribute_flip = 0.5;     // per-coordinate flip rate against the
                                   // domain signature; 0.5 = i.i.d. fair coins
  std::optional<double> holdout_flip;  // flip rate on held-out domains;
                                       // defaults to attribute_flip
  double attribute_correlation = 0.0;  // odd coordinates copy their even
                                       // neighbor with this probability
  std::uint64_t seed = 0;

  double effective_holdout_flip() const { return holdout_flip.value_or(attribute_flip); }

  void validate() const;
};

/// Deterministic draw of (train, test) with held-out test domains. When the
/// flip rates are below 0.5 each domain gets a binary signature: held-out
/// domains receive complementary balanced codewords (every attribute differs
/// across a held-out pair, and all signatures activate the same number of
/// attributes), training domains draw distinct even-parity codewords. The
/// signature table is stored on both datasets, which is what the zero-shot
/// pathway needs.
std::pair<Dataset, Dataset> generate(const SynthSpec& spec);

}  // namespace kdica
