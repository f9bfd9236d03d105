#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace kdica {

/// Deterministic 64-bit generator (splitmix64). Every random choice in the
/// library flows through this type, seeded from a single top-level seed via
/// named substreams, so results reproduce bit-for-bit for a given seed
/// regardless of thread count or execution order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Independent stream for a named component ("folds", "svm-attr-3", ...).
  static Rng substream(std::uint64_t seed, std::string_view name);

  /// Derived seed for components that take a seed of their own.
  static std::uint64_t mix(std::uint64_t seed, std::string_view name);

  std::uint64_t next_u64();

  /// Uniform in [0, 1).
  double next_double();

  /// Uniform integer in [0, bound); bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound);

  /// Standard normal deviate (Box-Muller, second value cached).
  double next_gaussian();

  bool next_bernoulli(double p) { return next_double() < p; }

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(next_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace kdica
