#include <benchmark/benchmark.h>

#include "kdica/domain_variance.hpp"
#include "kdica/kdica.hpp"
#include "kdica/kernels.hpp"
#include "kdica/metrics.hpp"
#include "kdica/rng.hpp"
#include "kdica/synthetic.hpp"

namespace {

kdica::Matrix random_features(int rows, int cols, std::uint64_t seed) {
  kdica::Rng rng(seed);
  kdica::Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.next_gaussian();
  return m;
}

void bm_gram_rbf(benchmark::State& state) {
  auto x = random_features(static_cast<int>(state.range(0)), 64, 7);
  for (auto _ : state) {
    auto k = kdica::gram(x, kdica::KernelFamily::rbf, 1.0);
    benchmark::DoNotOptimize(k.values.data());
  }
}
BENCHMARK(bm_gram_rbf)->Arg(128)->Arg(256)->Arg(512);

void bm_fit(benchmark::State& state) {
  kdica::SynthSpec spec;
  spec.num_domains = 6;
  spec.train_domains = 6;
  spec.samples_per_domain = static_cast<int>(state.range(0)) / 6;
  auto [train, test] = kdica::generate(spec);
  kdica::KdicaConfig cfg;
  cfg.num_components = 10;
  for (auto _ : state) {
    auto model = kdica::fit(train, cfg);
    benchmark::DoNotOptimize(model.projection.data());
  }
}
BENCHMARK(bm_fit)->Arg(120)->Arg(240);

void bm_auc(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  kdica::Rng rng(11);
  kdica::Vector scores(n);
  kdica::IntVector labels(n);
  for (int i = 0; i < n; ++i) {
    scores[i] = rng.next_double();
    labels[i] = rng.next_bernoulli(0.4) ? 1 : 0;
  }
  for (auto _ : state) {
    auto a = kdica::auc(scores, labels);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(bm_auc)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
