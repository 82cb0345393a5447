#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tact/error.hpp"
#include "tact/model/network.hpp"
#include "tact/numeric/gradient_check.hpp"

using namespace tact;
using tact::testing::random_sample;
using tact::testing::toy_config;

namespace {

GradientCheckResult check_score(Network& net, const Sample& s, double h = 1e-6) {
  auto params = net.parameters();
  return gradient_check(
      params, [&] { return Tensor::vector({net.score(s)}); },
      [&] {
        SampleTrace trace;
        net.embed(s, &trace);
        net.backward_score(trace, 1.0);
      },
      h);
}

}  // namespace

TEST(Network, EndToEndGradientMatchesFiniteDifferences) {
  for (std::uint64_t seed : {1, 2, 3}) {
    Network net(toy_config(), seed);
    Rng rng(seed + 100);
    const Sample s = random_sample(rng, net.config());
    const auto r = check_score(net, s);
    EXPECT_LT(r.max_relative_error, 1e-4) << r.worst_parameter << "[" << r.worst_index << "] " << r.analytic
                                          << " vs " << r.numeric;
  }
}

TEST(Network, TimeBlindGradientMatchesFiniteDifferences) {
  auto c = toy_config();
  c.time_aware = false;
  Network net(c, 5);
  Rng rng(6);
  const auto r = check_score(net, random_sample(rng, c));
  EXPECT_LT(r.max_relative_error, 1e-4) << r.worst_parameter;
}

TEST(Network, PaddedHistoryGradientMatchesFiniteDifferences) {
  Network net(toy_config(), 8);
  Rng rng(9);
  Sample s = random_sample(rng, net.config());
  s.history[0] = ItemRecord::null_item(s.target.time, net.config().raw_dim);
  s.history[1] = ItemRecord::null_item(s.target.time, net.config().raw_dim);
  const auto r = check_score(net, s);
  EXPECT_LT(r.max_relative_error, 1e-4) << r.worst_parameter;
}

TEST(Network, DefaultSampleEmbeddingWidthIs188) {
  ModelConfig c;
  c.category_vocab = 4;
  c.aux_in = 2;
  Network net(c, 1);
  Rng rng(2);
  auto tc = c;
  const Sample s = random_sample(rng, tc);
  const auto e = net.embed(s);
  EXPECT_EQ(e.sample.size(), 188u);
  EXPECT_EQ(e.history.size(), 90u);
  EXPECT_EQ(e.item.size(), 90u);
  EXPECT_EQ(e.aux.size(), 8u);
}
