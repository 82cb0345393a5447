#include <gtest/gtest.h>

#include <cmath>

#include "tact/error.hpp"
#include "tact/numeric/adam.hpp"
#include "tact/numeric/gradient_check.hpp"
#include "tact/numeric/ops.hpp"
#include "tact/numeric/random.hpp"

using namespace tact;

namespace {

Parameter random_param(const std::string& name, Shape shape, Rng& rng, double scale = 1.0) {
  Parameter p(name, shape);
  for (double& v : p.value.values()) v = scale * (2.0 * uniform01(rng) - 1.0);
  return p;
}

Tensor random_vector(std::size_t n, Rng& rng) {
  Tensor t = Tensor::zeros(n);
  for (double& v : t.values()) v = standard_normal(rng);
  return t;
}

// Wraps an input vector as a parameter so gradient_check can perturb it.
Parameter as_param(const std::string& name, const Tensor& t) {
  Parameter p(name, t.shape());
  p.value = t;
  return p;
}

double weighted_sum(const Tensor& y, const Tensor& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * c[i];
  return s;
}

}  // namespace

TEST(Tensor, ShapeAndSizeAgree) {
  Tensor t(Shape{2, 3});
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 3u);
  EXPECT_THROW(Tensor(Shape{2, 2}, std::vector<double>(3)), ConfigError);
  EXPECT_THROW(Shape({2, 0}), ConfigError);
}

TEST(Parameter, ZeroGradClearsAccumulator) {
  Parameter p("p", Shape{3});
  p.grad.fill(2.0);
  p.zero_grad();
  for (double g : p.grad.values()) EXPECT_EQ(g, 0.0);
  EXPECT_EQ(p.grad.shape(), p.value.shape());
}

TEST(Affine, IdentityWeightReturnsInput) {
  Parameter W("W", Shape{2, 2}), b("b", Shape{2});
  W.value.at(0, 0) = W.value.at(1, 1) = 1.0;
  const Tensor y = ops::affine(Tensor::vector({1.0, 0.0}), W, b);
  EXPECT_EQ(y[0], 1.0);
  EXPECT_EQ(y[1], 0.0);
}

TEST(Affine, ZeroInputReturnsBias) {
  Rng rng(3);
  Parameter W = random_param("W", Shape{3, 4}, rng);
  Parameter b = random_param("b", Shape{3}, rng);
  const Tensor y = ops::affine(Tensor::zeros(4), W, b);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(y[i], b.value[i]);
}

TEST(Affine, ShapeMismatchNamesBothShapes) {
  Parameter W("W", Shape{3, 4}), b("b", Shape{3});
  try {
    ops::affine(Tensor::zeros(5), W, b);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("[3x4]"), std::string::npos) << msg;
    EXPECT_NE(msg.find("[5]"), std::string::npos) << msg;
  }
}

TEST(Affine, BackwardMatchesFiniteDifferences) {
  Rng rng(7);
  Parameter W = random_param("W", Shape{4, 4}, rng);
  Parameter b = random_param("b", Shape{4}, rng);
  Parameter x = as_param("x", random_vector(4, rng));
  const Tensor c = random_vector(4, rng);
  std::vector<Parameter*> params = {&W, &b, &x};
  const auto r = gradient_check(
      params, [&] { return Tensor::vector({weighted_sum(ops::affine(x.value, W, b), c)}); },
      [&] {
        Tensor dx;
        ops::affine_backward(x.value, W, b, c, &dx);
        for (std::size_t i = 0; i < dx.size(); ++i) x.grad[i] += dx[i];
      });
  EXPECT_LT(r.max_relative_error, 1e-6) << r.worst_parameter;
}

TEST(Activations, TrivialValues) {
  EXPECT_EQ(ops::sigmoid(0.0), 0.5);
  for (double c : {-1e300, -3.0, 0.0, 7.5, 1e300}) {
    const Tensor p = ops::softmax(Tensor::vector({c, c, c}));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(p[i], 1.0 / 3.0, 1e-15) << c;
  }
  const Tensor y = ops::tanh(Tensor::vector({0.0}));
  const Tensor d = ops::activate_backward(ops::Activation::Tanh, y, Tensor::vector({1.0}));
  EXPECT_EQ(d[0], 1.0);
}

TEST(Activations, SoftmaxRowsSumToOneAndIgnoreShifts) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 12);
    Tensor x = random_vector(n, rng);
    for (double& v : x.values()) v *= 30.0;
    const Tensor p = ops::softmax(x);
    double sum = 0.0;
    for (double v : p.values()) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    Tensor shifted = x;
    const double c = 100.0 * standard_normal(rng);
    for (double& v : shifted.values()) v += c;
    const Tensor q = ops::softmax(shifted);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(p[i], q[i], 1e-12);
  }
}

TEST(Activations, SoftmaxOfMatrixNormalisesEachRow) {
  Tensor x(Shape{2, 3}, {1.0, 2.0, 3.0, -1.0, 0.0, 5.0});
  const Tensor p = ops::softmax(x);
  for (std::size_t r = 0; r < 2; ++r) {
    EXPECT_NEAR(p.at(r, 0) + p.at(r, 1) + p.at(r, 2), 1.0, 1e-12);
  }
}

TEST(Activations, BackwardMatchesFiniteDifferences) {
  using ops::Activation;
  for (Activation kind : {Activation::Sigmoid, Activation::Tanh, Activation::Relu, Activation::Softmax}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      Rng rng(seed);
      Tensor x0 = random_vector(6, rng);
      if (kind == Activation::Relu) {
        // Keep every input away from the kink.
        for (double& v : x0.values()) v = (v >= 0.0 ? 1.0 : -1.0) * (std::abs(v) + 1e-2);
      }
      Parameter x = as_param("x", x0);
      const Tensor c = random_vector(6, rng);
      std::vector<Parameter*> params = {&x};
      const auto r = gradient_check(
          params, [&] { return Tensor::vector({weighted_sum(ops::activate(kind, x.value), c)}); },
          [&] {
            const Tensor y = ops::activate(kind, x.value);
            const Tensor d = ops::activate_backward(kind, y, c);
            for (std::size_t i = 0; i < d.size(); ++i) x.grad[i] += d[i];
          });
      EXPECT_LT(r.max_relative_error, 1e-5) << ops::activation_name(kind) << " seed " << seed;
    }
  }
}

TEST(L2Distance, TrivialValues) {
  const Tensor a = Tensor::vector({3.0, 4.0});
  EXPECT_EQ(ops::l2_distance(a, a), 0.0);
  EXPECT_EQ(ops::l2_distance(a, Tensor::zeros(2)), 5.0);
  Tensor da, db;
  ops::l2_distance_backward(a, a, 1.0, &da, &db);
  for (double v : da.values()) EXPECT_EQ(v, 0.0);
  for (double v : db.values()) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(ops::l2_distance(a, Tensor::zeros(3)), ConfigError);
}

TEST(L2Distance, BackwardMatchesFiniteDifferences) {
  Rng rng(11);
  Parameter a = as_param("a", random_vector(8, rng));
  Parameter b = as_param("b", random_vector(8, rng));
  std::vector<Parameter*> params = {&a, &b};
  const auto r = gradient_check(
      params, [&] { return Tensor::vector({ops::l2_distance(a.value, b.value)}); },
      [&] {
        Tensor da, db;
        ops::l2_distance_backward(a.value, b.value, 1.0, &da, &db);
        for (std::size_t i = 0; i < 8; ++i) {
          a.grad[i] += da[i];
          b.grad[i] += db[i];
        }
      });
  EXPECT_LT(r.max_relative_error, 1e-6);
}

TEST(OpBackward, RandomSmoothInputsMatchFiniteDifferences) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Rng rng(seed * 31);
    const std::size_t m = 1 + uniform_index(rng, 6), n = 1 + uniform_index(rng, 6);
    Parameter W = random_param("W", Shape{m, n}, rng);
    Parameter x = as_param("x", random_vector(n, rng));
    Parameter E = random_param("E", Shape{m, 5}, rng);
    const std::size_t col = uniform_index(rng, 5);
    const Tensor c = random_vector(m, rng);
    std::vector<Parameter*> params = {&W, &x, &E};
    auto forward = [&] {
      Tensor y = ops::matvec(W, x.value);
      const Tensor e = ops::onehot_project(E, col);
      for (std::size_t i = 0; i < m; ++i) y[i] += e[i];
      return Tensor::vector({weighted_sum(ops::tanh(y), c)});
    };
    const auto r = gradient_check(params, forward, [&] {
      Tensor y = ops::matvec(W, x.value);
      const Tensor e = ops::onehot_project(E, col);
      for (std::size_t i = 0; i < m; ++i) y[i] += e[i];
      const Tensor dy = ops::activate_backward(ops::Activation::Tanh, ops::tanh(y), c);
      Tensor dx;
      ops::matvec_backward(x.value, W, dy, &dx);
      ops::onehot_project_backward(E, col, dy);
      for (std::size_t i = 0; i < n; ++i) x.grad[i] += dx[i];
    });
    EXPECT_LT(r.max_relative_error, 1e-5) << "seed " << seed;
  }
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Parameter p("p", Shape{1});
  p.grad[0] = 1.0;
  AdamState state(AdamConfig{0.001});
  std::vector<Parameter*> params = {&p};
  adam_step(params, state);
  EXPECT_NEAR(p.value[0], -0.001 / (1.0 + 1e-8), 1e-18);
  EXPECT_NEAR(p.value[0], -0.000999999990, 1e-15);
  EXPECT_EQ(p.grad[0], 0.0);
  EXPECT_EQ(state.steps(), 1u);
}

TEST(Adam, ZeroGradientIsANoOp) {
  Rng rng(4);
  Parameter p = random_param("p", Shape{3, 2}, rng);
  const Tensor before = p.value;
  AdamState state;
  std::vector<Parameter*> params = {&p};
  for (int i = 0; i < 25; ++i) adam_step(params, state);
  EXPECT_EQ(p.value, before);
  EXPECT_EQ(state.steps(), 25u);
}

TEST(Adam, MomentsStayConformingAndSecondMomentNonNegative) {
  Rng rng(5);
  Parameter p = random_param("p", Shape{4, 3}, rng);
  AdamState state(AdamConfig{0.01});
  std::vector<Parameter*> params = {&p};
  for (std::uint64_t t = 1; t <= 50; ++t) {
    for (double& g : p.grad.values()) g = standard_normal(rng);
    adam_step(params, state);
    EXPECT_EQ(state.steps(), t);
    ASSERT_EQ(state.second_moments().size(), 1u);
    EXPECT_EQ(state.first_moments()[0].shape(), p.value.shape());
    for (double v : state.second_moments()[0].values()) EXPECT_GE(v, 0.0);
  }
}

TEST(Adam, TrajectoriesAreBitwiseReproducible) {
  auto run = [] {
    Rng rng(42);
    Parameter a = random_param("a", Shape{5, 4}, rng), b = random_param("b", Shape{4}, rng);
    AdamState state(AdamConfig{0.01});
    std::vector<Parameter*> params = {&a, &b};
    for (int step = 0; step < 100; ++step) {
      for (Parameter* p : params) {
        for (std::size_t i = 0; i < p->value.size(); ++i) p->grad[i] = std::sin(p->value[i] * 3.0) + standard_normal(rng);
      }
      adam_step(params, state);
    }
    return std::make_pair(a.value, b.value);
  };
  EXPECT_EQ(run(), run());
}

TEST(GradientCheck, LinearFunctionIsExact) {
  Rng rng(2);
  Parameter w = random_param("w", Shape{6}, rng);
  const Tensor x = random_vector(6, rng);
  std::vector<Parameter*> params = {&w};
  const auto r = gradient_check(
      params, [&] { return Tensor::vector({weighted_sum(w.value, x)}); },
      [&] {
        for (std::size_t i = 0; i < 6; ++i) w.grad[i] += x[i];
      });
  EXPECT_LT(r.max_relative_error, 1e-9);
  EXPECT_EQ(r.coordinates_checked, 6u);
}

TEST(GradientCheck, ReluPipelineAwayFromKinks) {
  Rng rng(13);
  Parameter W1 = random_param("W1", Shape{5, 4}, rng), b1 = random_param("b1", Shape{5}, rng);
  Parameter W2 = random_param("W2", Shape{1, 5}, rng), b2 = random_param("b2", Shape{1}, rng);
  Tensor x = random_vector(4, rng);
  // Nudge the input until every hidden pre-activation is clear of zero.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Tensor pre = ops::affine(x, W1, b1);
    bool clear = true;
    for (double v : pre.values()) clear = clear && std::abs(v) > 1e-3;
    if (clear) break;
    x = random_vector(4, rng);
  }
  std::vector<Parameter*> params = {&W1, &b1, &W2, &b2};
  const auto r = gradient_check(
      params, [&] { return ops::affine(ops::relu(ops::affine(x, W1, b1)), W2, b2); },
      [&] {
        const Tensor h = ops::relu(ops::affine(x, W1, b1));
        Tensor dh;
        ops::affine_backward(h, W2, b2, Tensor::vector({1.0}), &dh);
        const Tensor dpre = ops::activate_backward(ops::Activation::Relu, h, dh);
        ops::affine_backward(x, W1, b1, dpre, nullptr);
      });
  EXPECT_LT(r.max_relative_error, 1e-5);
}

TEST(GradientCheck, RejectsNonScalarForwardAndBadStep) {
  Parameter w("w", Shape{2});
  std::vector<Parameter*> params = {&w};
  EXPECT_THROW(gradient_check(params, [] { return Tensor::zeros(2); }, [] {}), ContractError);
  EXPECT_THROW(gradient_check(params, [] { return Tensor::zeros(1); }, [] {}, 1e-2), ContractError);
}

TEST(Random, UniformIndexOfOneConsumesNothing) {
  Rng a(9), b(9);
  EXPECT_EQ(uniform_index(a, 1), 0u);
  EXPECT_EQ(a(), b());
  EXPECT_THROW(uniform_index(a, 0), ContractError);
}

TEST(Random, SingleDrawWithoutReplacementIsOneUniformIndex) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng a(seed), b(seed);
    const std::size_t n = 1 + uniform_index(a, 1000);
    uniform_index(b, 1000);
    EXPECT_EQ(sample_without_replacement(a, n, 1).front(), uniform_index(b, n));
    EXPECT_EQ(a(), b());
  }
}

TEST(Random, WithoutReplacementGivesDistinctIndices) {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 50);
    const std::size_t k = uniform_index(rng, n + 1);
    auto picks = sample_without_replacement(rng, n, k);
    ASSERT_EQ(picks.size(), k);
    std::sort(picks.begin(), picks.end());
    EXPECT_EQ(std::adjacent_find(picks.begin(), picks.end()), picks.end());
    for (std::size_t p : picks) EXPECT_LT(p, n);
  }
}

TEST(Random, StreamsAreDistinct) {
  EXPECT_NE(stream_seed(1, 0), stream_seed(1, 1));
  EXPECT_NE(stream_seed(1, 0), stream_seed(2, 0));
  EXPECT_EQ(stream_seed(7, 3), stream_seed(7, 3));
}

TEST(Random, GlorotBoundsAndZeroBiases) {
  Rng rng(23);
  Parameter W("W", Shape{30, 20}), b("b", Shape{30});
  b.value.fill(1.0);
  glorot_uniform(W, rng);
  glorot_uniform(b, rng);
  const double bound = std::sqrt(6.0 / 50.0);
  for (double v : W.value.values()) EXPECT_LE(std::abs(v), bound);
  for (double v : b.value.values()) EXPECT_EQ(v, 0.0);
}
