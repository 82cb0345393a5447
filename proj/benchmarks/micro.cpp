#include <benchmark/benchmark.h>

#include <vector>

#include "fixtures.hpp"
#include "tact/calibration/calibration.hpp"
#include "tact/eval/metrics.hpp"
#include "tact/model/network.hpp"
#include "tact/numeric/ops.hpp"
#include "tact/numeric/random.hpp"

using namespace tact;

namespace {

ModelConfig bench_config(std::size_t L) {
  ModelConfig c = testing::toy_config(L);
  c.item_dim = 32;
  c.hidden_dim = 32;
  c.attention_dim = 32;
  c.ff_width = 64;
  return c;
}

void BM_EmbedForward(benchmark::State& state) {
  const ModelConfig c = bench_config(static_cast<std::size_t>(state.range(0)));
  const Network net(c, 1);
  Rng rng(2);
  const Sample s = testing::random_sample(rng, c);
  for (auto _ : state) benchmark::DoNotOptimize(net.score(s));
}
BENCHMARK(BM_EmbedForward)->Arg(5)->Arg(20);

void BM_EmbedForwardBackward(benchmark::State& state) {
  const ModelConfig c = bench_config(static_cast<std::size_t>(state.range(0)));
  Network net(c, 1);
  Rng rng(2);
  const Sample s = testing::random_sample(rng, c);
  for (auto _ : state) {
    SampleTrace trace;
    const SampleEmbedding e = net.embed(s, &trace);
    benchmark::DoNotOptimize(net.score(e));
    net.backward_score(trace, 1.0);
  }
}
BENCHMARK(BM_EmbedForwardBackward)->Arg(5)->Arg(20);

void BM_Gemv(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  std::vector<double> W(n * n), x(n), y(n);
  for (double& v : W) v = standard_normal(rng);
  for (double& v : x) v = standard_normal(rng);
  for (auto _ : state) {
    ops::kernel::gemv_acc(W.data(), n, n, x.data(), y.data());
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}
BENCHMARK(BM_Gemv)->Arg(32)->Arg(128)->Arg(512);

void BM_Auc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  std::vector<double> s(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = uniform01(rng);
    y[i] = uniform01(rng) < s[i] ? 1 : 0;
  }
  for (auto _ : state) benchmark::DoNotOptimize(auc(s, y));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_Auc)->Arg(1000)->Arg(100000);

void BM_Pava(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(5);
  std::vector<double> y(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = uniform01(rng) + 1e-4 * static_cast<double>(i);
    w[i] = 1.0 + static_cast<double>(uniform_index(rng, 50));
  }
  for (auto _ : state) benchmark::DoNotOptimize(pava_fit(y, w));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_Pava)->Arg(100)->Arg(10000);

void BM_Kendall(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(6);
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = standard_normal(rng);
    b[i] = a[i] + standard_normal(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(kendall_tau(a, b));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_Kendall)->Arg(1000)->Arg(100000);

}  // namespace
BENCHMARK_MAIN();
