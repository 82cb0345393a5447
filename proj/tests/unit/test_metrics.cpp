#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "tact/error.hpp"
#include "tact/eval/metrics.hpp"
#include "tact/numeric/random.hpp"

using namespace tact;
using tact::testing::pair_count_auc;
using tact::testing::pair_count_tau_b;

namespace {

std::vector<double> coarse_scores(Rng& rng, std::size_t n, std::size_t levels) {
  std::vector<double> s(n);
  for (double& v : s) v = static_cast<double>(uniform_index(rng, levels));
  return s;
}

}  // namespace

TEST(Auc, MatchesPairCountingExactly) {
  Rng rng(1);
  for (int instance = 0; instance < 50; ++instance) {
    const std::size_t n = 2 + uniform_index(rng, 199);
    std::vector<double> s = coarse_scores(rng, n, 1 + uniform_index(rng, 30));
    std::vector<int> y(n);
    for (int& v : y) v = static_cast<int>(uniform_index(rng, 2));
    y[0] = 1;
    y[1] = 0;
    EXPECT_EQ(auc(s, y), pair_count_auc(s, y)) << instance;
  }
}

TEST(Auc, TrivialCases) {
  EXPECT_EQ(auc(std::vector<double>{2.0}, std::vector<double>{1.0}), 1.0);
  EXPECT_EQ(auc(std::vector<double>{1.0}, std::vector<double>{2.0}), 0.0);
  EXPECT_EQ(auc(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0}), 0.5);
  EXPECT_THROW(auc(std::vector<double>{1.0}, std::vector<int>{1}), ContractError);
  EXPECT_THROW(auc(std::vector<double>{}, std::vector<double>{1.0}), ContractError);
  EXPECT_THROW(auc(std::vector<double>{1.0, 2.0}, std::vector<int>{1, 2}), ValidationError);
}

TEST(Auc, InvariantUnderMonotoneTransformsAndFlipsUnderNegation) {
  Rng rng(2);
  for (int instance = 0; instance < 100; ++instance) {
    const std::size_t n = 4 + uniform_index(rng, 100);
    std::vector<double> s(n), t(n), neg(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = std::round(4.0 * standard_normal(rng));
      t[i] = std::exp(0.5 * s[i]) + 3.0;
      neg[i] = -s[i];
      y[i] = i < 2 ? static_cast<int>(i) : static_cast<int>(uniform_index(rng, 2));
    }
    const double a = auc(s, y);
    EXPECT_DOUBLE_EQ(auc(t, y), a);
    EXPECT_NEAR(auc(neg, y), 1.0 - a, 1e-12);
  }
}

TEST(RelaImpr, PublishedPairs) {
  EXPECT_NEAR(rela_impr(0.7745, 0.7639), 4.02, 0.01);
  EXPECT_NEAR(rela_impr(0.7745, 0.7405), 14.14, 0.01);
  EXPECT_DOUBLE_EQ(rela_impr(0.7, 0.7), 0.0);
  EXPECT_DOUBLE_EQ(rela_impr(0.5, 0.7), -100.0);
  EXPECT_THROW(rela_impr(0.7, 0.5), ContractError);
}

TEST(Kendall, MatchesPairCountingForSmallSets) {
  Rng rng(3);
  for (std::size_t C = 2; C <= 10; ++C) {
    for (int instance = 0; instance < 40; ++instance) {
      const std::size_t levels = instance % 2 == 0 ? 1000000 : 1 + uniform_index(rng, 4);
      const auto a = coarse_scores(rng, C, levels);
      const auto b = coarse_scores(rng, C, levels);
      EXPECT_NEAR(kendall_tau(a, b), pair_count_tau_b(a, b), 1e-12) << C;
    }
  }
}

TEST(Kendall, MatchesPairCountingForLargerTiedSets) {
  Rng rng(4);
  for (int instance = 0; instance < 30; ++instance) {
    const std::size_t n = 20 + uniform_index(rng, 300);
    const auto a = coarse_scores(rng, n, 2 + uniform_index(rng, 20));
    const auto b = coarse_scores(rng, n, 2 + uniform_index(rng, 20));
    EXPECT_NEAR(kendall_tau(a, b), pair_count_tau_b(a, b), 1e-12);
  }
}

TEST(Kendall, SymmetryAndExtremes) {
  Rng rng(5);
  for (int instance = 0; instance < 100; ++instance) {
    const std::size_t n = 2 + uniform_index(rng, 30);
    const auto a = coarse_scores(rng, n, 8);
    const auto b = coarse_scores(rng, n, 8);
    std::vector<double> neg(n);
    std::transform(b.begin(), b.end(), neg.begin(), [](double v) { return -v; });
    EXPECT_NEAR(kendall_tau(a, b), kendall_tau(b, a), 1e-12);
    EXPECT_NEAR(kendall_tau(a, neg), -kendall_tau(a, b), 1e-12);
  }
  const std::vector<double> up = {1, 2, 3, 4};
  const std::vector<double> down = {4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(kendall_tau(up, up), 1.0);
  EXPECT_DOUBLE_EQ(kendall_tau(up, down), -1.0);
  EXPECT_EQ(kendall_tau(up, std::vector<double>(4, 7.0)), 0.0);
  EXPECT_THROW(kendall_tau(up, std::vector<double>{1.0}), ContractError);
}
