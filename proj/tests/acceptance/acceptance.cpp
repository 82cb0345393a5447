// Acceptance checks. Prints one line per criterion and exits non-zero when any fails.
// Usage: tact_acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "policy_oracle.hpp"
#include "tact/calibration/calibration.hpp"
#include "tact/data/synthetic.hpp"
#include "tact/eval/metrics.hpp"
#include "tact/eval/scoring.hpp"
#include "tact/harness/commands.hpp"
#include "tact/model/attention.hpp"
#include "tact/model/gru.hpp"
#include "tact/model/item_embedder.hpp"
#include "tact/model/losses.hpp"
#include "tact/numeric/gradient_check.hpp"
#include "tact/numeric/ops.hpp"
#include "tact/sampler/negative_sampling.hpp"
#include "tact/sampler/trainer.hpp"

using namespace tact;
using namespace tact::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : " ") + fmt("%.4f", x);
  return out;
}

void randomize(std::vector<Parameter*> params, Rng& rng, double scale = 0.5) {
  for (Parameter* p : params)
    for (double& v : p->value.values()) v = scale * standard_normal(rng);
}

Tensor random_vector(Rng& rng, std::size_t n) {
  Tensor t = Tensor::zeros(n);
  for (double& v : t.values()) v = standard_normal(rng);
  return t;
}

double weighted_sum(const Tensor& t, const Tensor& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += t[i] * w[i];
  return s;
}

Parameter as_param(const std::string& name, const Tensor& t) {
  Parameter p(name, t.shape());
  p.value = t;
  return p;
}

void add_into(Parameter& p, const Tensor& g) {
  for (std::size_t i = 0; i < g.size(); ++i) p.grad[i] += g[i];
}

// ---------------------------------------------------------------- 1

double network_check(const ModelConfig& c, std::uint64_t seed, std::size_t padded) {
  Network net(c, seed);
  Rng rng(seed + 1000);
  Sample s = random_sample(rng, c);
  for (std::size_t l = 0; l < padded; ++l) s.history[l] = ItemRecord::null_item(s.target.time, c.raw_dim);
  auto params = net.parameters();
  return gradient_check(
             params, [&] { return Tensor::vector({net.score(s)}); },
             [&] {
               SampleTrace trace;
               net.embed(s, &trace);
               net.backward_score(trace, 1.0);
             })
      .max_relative_error;
}

double op_checks() {
  Rng rng(11);
  double worst = 0.0;
  auto track = [&](const GradientCheckResult& r) { worst = std::max(worst, r.max_relative_error); };

  {
    Parameter W("W", {5, 4}), b("b", {5});
    randomize({&W, &b}, rng);
    Parameter x = as_param("x", random_vector(rng, 4));
    const Tensor w = random_vector(rng, 5);
    std::vector<Parameter*> p = {&W, &b, &x};
    track(gradient_check(
        p, [&] { return Tensor::vector({weighted_sum(ops::affine(x.value, W, b), w)}); },
        [&] {
          Tensor dx;
          ops::affine_backward(x.value, W, b, w, &dx);
          add_into(x, dx);
        }));
    std::vector<Parameter*> q = {&W, &x};
    track(gradient_check(
        q, [&] { return Tensor::vector({weighted_sum(ops::matvec(W, x.value), w)}); },
        [&] {
          Tensor dx;
          ops::matvec_backward(x.value, W, w, &dx);
          add_into(x, dx);
        }));
    std::vector<Parameter*> r = {&W};
    track(gradient_check(
        r, [&] { return Tensor::vector({weighted_sum(ops::onehot_project(W, 2), w)}); },
        [&] { ops::onehot_project_backward(W, 2, w); }));
  }
  for (ops::Activation kind : {ops::Activation::Sigmoid, ops::Activation::Tanh, ops::Activation::Relu, ops::Activation::Softmax}) {
    Tensor x0 = random_vector(rng, 6);
    for (double& v : x0.values())
      if (std::abs(v) < 1e-3) v = 0.5;
    Parameter x = as_param("x", x0);
    const Tensor w = random_vector(rng, 6);
    std::vector<Parameter*> p = {&x};
    track(gradient_check(
        p, [&] { return Tensor::vector({weighted_sum(ops::activate(kind, x.value), w)}); },
        [&] { add_into(x, ops::activate_backward(kind, ops::activate(kind, x.value), w)); }));
  }
  {
    Parameter a = as_param("a", random_vector(rng, 8)), b = as_param("b", random_vector(rng, 8));
    std::vector<Parameter*> p = {&a, &b};
    track(gradient_check(
        p, [&] { return Tensor::vector({ops::l2_distance(a.value, b.value)}); },
        [&] {
          Tensor da, db;
          ops::l2_distance_backward(a.value, b.value, 1.0, &da, &db);
          add_into(a, da);
          add_into(b, db);
        }));
  }
  {
    GruStack gru("g", 2, 5, 4);
    randomize(gru.parameters(), rng);
    std::vector<Tensor> inputs, weights;
    for (int l = 0; l < 4; ++l) {
      inputs.push_back(random_vector(rng, 5));
      weights.push_back(random_vector(rng, 4));
    }
    auto p = gru.parameters();
    track(gradient_check(
        p,
        [&] {
          const auto states = gru.forward(inputs);
          double total = 0.0;
          for (std::size_t l = 0; l < states.size(); ++l) total += weighted_sum(states[l], weights[l]);
          return Tensor::vector({total});
        },
        [&] {
          std::vector<std::vector<GruStepTrace>> trace;
          gru.forward(inputs, &trace);
          gru.backward(trace, weights);
        }));
  }
  for (bool time_aware : {true, false}) {
    Attention att("a", 8, 16, 8, time_aware);
    randomize(att.parameters(), rng);
    std::vector<Tensor> states, times;
    for (int l = 0; l < 4; ++l) {
      states.push_back(random_vector(rng, 8));
      times.push_back(relative_time_encoding(100000, 100000 - 5000 * l, 16));
    }
    const std::vector<bool> mask = {true, false, false, false};
    const Tensor target = random_vector(rng, 16), w = random_vector(rng, 8);
    std::vector<Tensor> d_states(4, Tensor::zeros(8));
    Tensor d_target = Tensor::zeros(16);
    auto p = att.parameters();
    track(gradient_check(
        p, [&] { return Tensor::vector({weighted_sum(att.forward(states, target, times, mask), w)}); },
        [&] {
          AttentionTrace trace;
          att.forward(states, target, times, mask, &trace);
          att.backward(states, target, times, trace, w, d_states, d_target);
        }));
  }
  {
    const ModelConfig c = toy_config();
    ItemEmbedder emb("i", c);
    randomize(emb.parameters(), rng);
    const ItemRecord item = random_item(rng, c, 1530403200 + 5 * 3600);
    const Tensor w = random_vector(rng, c.item_dim);
    auto p = emb.parameters();
    track(gradient_check(
        p, [&] { return Tensor::vector({weighted_sum(emb.forward(item), w)}); },
        [&] {
          ItemTrace trace;
          emb.forward(item, &trace);
          emb.backward(trace, w);
        }));
  }
  {
    Parameter anchor = as_param("anchor", random_vector(rng, 6));
    std::vector<Parameter> cands;
    for (int k = 0; k < 3; ++k) cands.push_back(as_param("c" + std::to_string(k), random_vector(rng, 6)));
    const std::vector<double> w = {0.4, -0.9, 1.3};
    auto values = [&] {
      std::vector<Tensor> t;
      for (auto& c : cands) t.push_back(c.value);
      return t;
    };
    std::vector<Parameter*> p = {&anchor, &cands[0], &cands[1], &cands[2]};
    track(gradient_check(
        p,
        [&] {
          const auto z = policy_logits(anchor.value, values(), 0.7);
          return Tensor::vector({w[0] * z[0] + w[1] * z[1] + w[2] * z[2]});
        },
        [&] {
          Tensor da;
          std::vector<Tensor> dc;
          policy_logits_backward(anchor.value, values(), 0.7, w, da, dc);
          add_into(anchor, da);
          for (int k = 0; k < 3; ++k) add_into(cands[k], dc[k]);
        }));
  }
  return worst;
}

Outcome criterion1() {
  ModelConfig c = toy_config();
  double end_to_end = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    end_to_end = std::max(end_to_end, network_check(c, seed, 0));
    end_to_end = std::max(end_to_end, network_check(c, seed, 2));
  }
  c.time_aware = false;
  end_to_end = std::max(end_to_end, network_check(c, 9, 1));
  const double ops_worst = op_checks();
  return {end_to_end < 1e-4 && ops_worst < 1e-5,
          fmt("end-to-end max rel err %.2e (< 1e-4), per-op max rel err %.2e (< 1e-5)", end_to_end, ops_worst)};
}

// ---------------------------------------------------------------- 2

Outcome criterion2() {
  const ModelConfig c = toy_config();
  double worst_gap = 0.0, worst_shift = 0.0;
  bool single_zero = true;
  for (std::size_t C = 1; C <= 4; ++C) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Network gen(c, 100 * C + seed);
      Rng rng(seed * 13 + C);
      const PolicyProblem prob = make_problem(rng, c, C);
      const auto reinforce = expected_reinforce(gen, prob, 0.5, 0.0);
      gen.zero_grad();
      backprop_objective(gen, prob, 0.5);
      auto oracle = flat_grads(gen);
      for (double& v : oracle) v = -v;
      if (C == 1) {
        single_zero = single_zero && norm(reinforce) == 0.0 && norm(oracle) == 0.0;
      } else {
        worst_gap = std::max(worst_gap, relative_gap(reinforce, oracle));
      }
      for (double b : {-2.0, 1.0, 7.5}) {
        const auto shifted = expected_reinforce(gen, prob, 0.5, b);
        for (std::size_t i = 0; i < shifted.size(); ++i)
          worst_shift = std::max(worst_shift, std::abs(shifted[i] - reinforce[i]));
      }
    }
  }
  return {worst_gap < 1e-6 && worst_shift < 1e-9 && single_zero,
          fmt("enumeration vs analytic max rel err %.2e (< 1e-6), baseline shift max abs change %.2e (< 1e-9)",
              worst_gap, worst_shift)};
}

// ---------------------------------------------------------------- shared tiny data

struct TinyData {
  Dataset train, test;
  ModelConfig model;
};

TinyData tiny_data() {
  SyntheticConfig c;
  c.n_users = 60;
  c.n_items = 200;
  c.n_categories = 5;
  c.n_samples = 2000;
  c.ctr = 0.08;
  c.history_length = 4;
  c.seed = 21;
  const SyntheticSplit split = split_by_day(generate_synthetic(c), c);
  TinyData out{split.train.data, split.test.data, {}};
  const std::size_t vocab = std::max(out.train.info().category_vocab, out.test.info().category_vocab);
  out.train.info().category_vocab = out.test.info().category_vocab = vocab;
  out.model = ModelConfig::for_dataset(out.train.info(), toy_config());
  return out;
}

// ---------------------------------------------------------------- 3

Outcome criterion3() {
  Rng rng(5);
  double worst = 0.0;
  for (std::size_t C : {2u, 5u, 20u, 100u}) {
    for (int trial = 0; trial < 25; ++trial) {
      const Tensor anchor = random_vector(rng, 40);
      std::vector<Tensor> cands;
      for (std::size_t k = 0; k < C; ++k) cands.push_back(random_vector(rng, 40));
      for (double p : policy_distribution(anchor, cands, 1e6))
        worst = std::max(worst, std::abs(p - 1.0 / static_cast<double>(C)));
    }
  }

  Rng a(2024), b(2024);
  bool streams_equal = true;
  for (int step = 0; step < 10000 && streams_equal; ++step) {
    const std::size_t pool = 2 + static_cast<std::size_t>(step % 997);
    const std::size_t candidate = sample_without_replacement(a, pool, 1).front();
    const std::vector<double> single = {1.0};
    const std::size_t action = sample_action(single, a);
    streams_equal = action == 0 && candidate == uniform_sample_index(pool, b);
  }
  streams_equal = streams_equal && a == b;

  const TinyData d = tiny_data();
  TrainConfig u;
  u.sampler = SamplerKind::Uniform;
  u.epochs = 3;
  u.steps_per_epoch = 5;
  u.snapshot_negatives = 200;
  TrainConfig g = u;
  g.sampler = SamplerKind::Rgan;
  g.candidates = 1;
  const TrainResult ru = adversarial_train(d.train, &d.test, d.model, u);
  const TrainResult rg = adversarial_train(d.train, &d.test, d.model, g);
  bool same_training = ru.steps.size() == rg.steps.size() && ru.final_test_auc == rg.final_test_auc;
  for (std::size_t i = 0; same_training && i < ru.steps.size(); ++i)
    same_training = ru.steps[i].d_loss == rg.steps[i].d_loss;

  return {worst < 1e-4 && streams_equal && same_training,
          fmt("T=1e6 max |p - 1/C| %.2e (< 1e-4), C=1 draw stream identical over 10000 steps: %s, "
              "C=1 training identical to uniform: %s",
              worst, streams_equal ? "yes" : "no", same_training ? "yes" : "no")};
}

// ---------------------------------------------------------------- 4

Outcome criterion4() {
  Rng rng(4);
  int auc_mismatch = 0;
  for (int instance = 0; instance < 50; ++instance) {
    const std::size_t n = 2 + uniform_index(rng, 199);
    const std::size_t levels = 1 + uniform_index(rng, 40);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(uniform_index(rng, levels)) / 7.0;
      y[i] = i < 2 ? static_cast<int>(i) : static_cast<int>(uniform_index(rng, 2));
    }
    if (auc(s, y) != pair_count_auc(s, y)) ++auc_mismatch;
  }

  double pava_worst = 0.0;
  for (int instance = 0; instance < 100; ++instance) {
    const std::size_t n = 1 + uniform_index(rng, 12);
    std::vector<double> y(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = standard_normal(rng);
      w[i] = 0.05 + 3.0 * uniform01(rng);
    }
    const auto fit = pava_fit(y, w);
    const auto oracle = brute_force_isotonic(y, w);
    for (std::size_t i = 0; i < n; ++i) pava_worst = std::max(pava_worst, std::abs(fit[i] - oracle[i]));
  }

  double tau_worst = 0.0;
  int tau_instances = 0;
  for (std::size_t C = 2; C <= 10; ++C) {
    for (int instance = 0; instance < 30; ++instance, ++tau_instances) {
      const std::size_t levels = instance % 3 == 0 ? 3 : 1000;
      std::vector<double> a(C), b(C);
      for (std::size_t i = 0; i < C; ++i) {
        a[i] = static_cast<double>(uniform_index(rng, levels));
        b[i] = static_cast<double>(uniform_index(rng, levels));
      }
      tau_worst = std::max(tau_worst, std::abs(kendall_tau(a, b) - pair_count_tau_b(a, b)));
    }
  }
  return {auc_mismatch == 0 && pava_worst < 1e-9 && tau_worst <= 1e-15,
          fmt("AUC exact on 50/50 instances (%d mismatches), PAVA max abs err %.2e over 100 instances (< 1e-9), "
              "Kendall max abs err %.1e over %d instances",
              auc_mismatch, pava_worst, tau_worst, tau_instances)};
}

// ---------------------------------------------------------------- 5

Outcome criterion5() {
  const double a = rela_impr(0.7745, 0.7639);
  const double b = rela_impr(0.7745, 0.7405);
  return {std::abs(a - 4.02) <= 0.01 && std::abs(b - 14.14) <= 0.01,
          fmt("(0.7745, 0.7639) -> %.4f%% (4.02), (0.7745, 0.7405) -> %.4f%% (14.14)", a, b)};
}

// ---------------------------------------------------------------- 6 and 7

constexpr int kSeeds = 5;

struct SyntheticRun {
  Dataset train, test;
  ModelConfig model;
};

SyntheticRun synthetic_run(double amplitude, std::uint64_t seed, bool time_aware) {
  SyntheticConfig sc;
  sc.periodic_amplitude = amplitude;
  sc.seed = seed;
  const SyntheticSplit split = split_by_day(generate_synthetic(sc), sc);
  SyntheticRun out{split.train.data, split.test.data, {}};
  const std::size_t vocab = std::max(out.train.info().category_vocab, out.test.info().category_vocab);
  out.train.info().category_vocab = out.test.info().category_vocab = vocab;
  ModelConfig m;
  m.item_dim = m.hidden_dim = m.attention_dim = m.ff_width = 16;
  m.time_aware = time_aware;
  out.model = ModelConfig::for_dataset(out.train.info(), m);
  return out;
}

double final_auc(double amplitude, std::uint64_t seed, bool time_aware, SamplerKind sampler) {
  const SyntheticRun run = synthetic_run(amplitude, seed, time_aware);
  TrainConfig t;
  t.sampler = sampler;
  t.epochs = 20;
  t.eval_every = 0;
  t.seed = seed;
  return *adversarial_train(run.train, &run.test, run.model, t).final_test_auc;
}

std::map<std::string, std::vector<double>> g_results;

std::vector<double> runs(const std::string& key, double amplitude, bool time_aware, SamplerKind sampler) {
  auto it = g_results.find(key);
  if (it != g_results.end()) return it->second;
  std::vector<double> aucs;
  for (int s = 1; s <= kSeeds; ++s) aucs.push_back(final_auc(amplitude, s, time_aware, sampler));
  g_results[key] = aucs;
  return aucs;
}

Outcome criterion6() {
  const auto aware = runs("A1.5/aware/uniform", 1.5, true, SamplerKind::Uniform);
  const auto blind = runs("A1.5/blind/uniform", 1.5, false, SamplerKind::Uniform);
  const auto aware0 = runs("A0/aware/uniform", 0.0, true, SamplerKind::Uniform);
  const auto blind0 = runs("A0/blind/uniform", 0.0, false, SamplerKind::Uniform);
  const double gap = mean(aware) - mean(blind);
  const double gap0 = mean(aware0) - mean(blind0);
  return {gap >= 0.02 && std::abs(gap0) <= 0.01,
          fmt("amplitude 1.5: time-aware %.4f vs blind %.4f, gap %+.4f (>= 0.02); amplitude 0: %.4f vs %.4f, "
              "gap %+.4f (within 0.01) [aware %s | blind %s | aware0 %s | blind0 %s]",
              mean(aware), mean(blind), gap, mean(aware0), mean(blind0), gap0, join(aware).c_str(),
              join(blind).c_str(), join(aware0).c_str(), join(blind0).c_str())};
}

Outcome criterion7() {
  const auto uniform = runs("A1.5/aware/uniform", 1.5, true, SamplerKind::Uniform);
  const auto rgan = runs("A1.5/aware/rgan", 1.5, true, SamplerKind::Rgan);
  const auto score = runs("A1.5/aware/score_only", 1.5, true, SamplerKind::RganScoreOnly);
  const auto penalty = runs("A1.5/aware/penalty_only", 1.5, true, SamplerKind::RganPenaltyOnly);
  const double r = mean(rgan), u = mean(uniform), s = mean(score), p = mean(penalty);
  return {r >= u && s < r && p < r,
          fmt("rgan %.4f vs uniform %.4f (>=), score-only %.4f (<), penalty-only %.4f (<) [rgan %s | uniform %s | "
              "score %s | penalty %s]",
              r, u, s, p, join(rgan).c_str(), join(uniform).c_str(), join(score).c_str(), join(penalty).c_str())};
}

// ---------------------------------------------------------------- 8

Outcome criterion8() {
  const std::vector<std::size_t> buckets = {100, 1000, 10000};
  std::vector<std::vector<double>> errors(buckets.size());
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    RunConfig rc;
    rc.synthetic.seed = seed;
    rc.synthetic.n_samples = 400000;
    rc.synthetic.n_users = 8000;
    rc.synthetic.test_days = 4;
    rc.model.item_dim = rc.model.hidden_dim = rc.model.attention_dim = rc.model.ff_width = 16;
    rc.train.sampler = SamplerKind::Uniform;
    rc.train.epochs = 5;
    rc.train.eval_every = 0;
    rc.train.seed = seed;
    const RunData d = load_run_data(rc);
    const TrainResult r = adversarial_train(d.train, &*d.test, model_config_for(rc, d.info()), rc.train);
    const ScoredDataset fit = score_dataset(r.discriminator, d.train);
    const ScoredDataset apply = score_dataset(r.discriminator, *d.test);
    for (std::size_t k = 0; k < buckets.size(); ++k) {
      const CalibrationReport c = calibration_report(fit.scores, fit.labels, apply.scores, apply.labels, buckets[k],
                                                     rc.calibration_epsilon);
      errors[k].push_back(c.relative_error);
    }
  }
  std::vector<double> means;
  for (const auto& e : errors) means.push_back(mean(e));
  const bool nonincreasing = means[0] >= means[1] && means[1] >= means[2];
  return {means[2] < 0.05 && nonincreasing,
          fmt("mean relative error over 3 seeds: n=100 %.2f%%, n=1000 %.2f%%, n=10000 %.2f%% (< 5%%); "
              "nonincreasing: %s [n=100 %s | n=1000 %s | n=10000 %s]",
              100 * means[0], 100 * means[1], 100 * means[2], nonincreasing ? "yes" : "no", join(errors[0]).c_str(),
              join(errors[1]).c_str(), join(errors[2]).c_str())};
}

// ---------------------------------------------------------------- 9

Outcome criterion9() {
  const fs::path root = fs::temp_directory_path() / "tact_acceptance_determinism";
  fs::remove_all(root);
  KeyValueConfig kv;
  kv.set("history_length", 4);
  kv.set("synthetic.n_samples", 3000);
  kv.set("synthetic.n_users", 100);
  kv.set("synthetic.ctr", 0.05);
  kv.set("item_dim", 8);
  kv.set("hidden_dim", 8);
  kv.set("attention_dim", 8);
  kv.set("ff_width", 8);
  kv.set("epochs", 3);
  kv.set("steps_per_epoch", 6);
  kv.set("candidates", 5);
  kv.set("calibration_buckets", 100);
  const RunConfig config = RunConfig::from_key_values(kv);
  const RunData data = load_run_data(config);
  std::vector<std::string> metrics;
  for (const char* name : {"a", "b"}) {
    fs::create_directories(root / name);
    train_into(config, data, root / name);
    std::ifstream in(root / name / "metrics.csv", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    metrics.push_back(ss.str());
  }
  fs::remove_all(root);
  const bool same = metrics[0] == metrics[1] && !metrics[0].empty();
  return {same, fmt("metrics.csv of two identical rgan runs: %zu and %zu bytes, byte-identical: %s", metrics[0].size(),
                    metrics[1].size(), same ? "yes" : "no")};
}

// ---------------------------------------------------------------- 10

Outcome criterion10() {
  Rng rng(10);
  std::vector<std::string> failures;
  int simplex = 0, circle = 0, hinge = 0, baseline = 0, pava = 0;

  for (; simplex < 150; ++simplex) {
    const std::size_t L = 1 + uniform_index(rng, 12);
    Attention att("a", 3, 4, 3, uniform_index(rng, 2) == 1);
    randomize(att.parameters(), rng, 0.5 + 4.0 * uniform01(rng));
    std::vector<Tensor> states, times;
    std::vector<bool> mask(L);
    const std::size_t padded = uniform_index(rng, L);
    for (std::size_t l = 0; l < L; ++l) {
      mask[l] = l < padded;
      states.push_back(random_vector(rng, 3));
      times.push_back(relative_time_encoding(2000000, 2000000 - 911 * static_cast<std::int64_t>(L - l), 4));
    }
    AttentionTrace trace;
    att.forward(states, random_vector(rng, 4), times, mask, &trace);
    double total = 0.0;
    bool ok = true;
    for (std::size_t l = 0; l < L; ++l) {
      ok = ok && trace.weights[l] >= 0.0 && (!mask[l] || trace.weights[l] == 0.0);
      total += trace.weights[l];
    }
    if (!ok || std::abs(total - 1.0) > 1e-12) failures.push_back("attention simplex");
  }

  for (; circle < 150; ++circle) {
    const std::int64_t t0 = 1500000000 + static_cast<std::int64_t>(uniform_index(rng, 100000000));
    const std::int64_t tl = t0 - static_cast<std::int64_t>(uniform_index(rng, 40000000));
    const std::size_t d = 2 * (1 + uniform_index(rng, 64));
    const Tensor e = relative_time_encoding(t0, tl, d);
    for (std::size_t j = 0; j < d / 2; ++j)
      if (std::abs(e[2 * j] * e[2 * j] + e[2 * j + 1] * e[2 * j + 1] - 1.0) > 1e-12) failures.push_back("unit circle");
  }

  for (; hinge < 150; ++hinge) {
    const double gamma = 0.01 + uniform01(rng);
    const double f_neg = 5.0 * standard_normal(rng);
    const double f_pos = f_neg + gamma + 1e-9 + 10.0 * uniform01(rng);
    const HingeGrad g = pairwise_hinge_grad(f_pos, f_neg, gamma);
    if (pairwise_hinge(f_pos, f_neg, gamma) != 0.0 || g.d_pos != 0.0 || g.d_neg != 0.0)
      failures.push_back("hinge flat region");
  }

  for (int i = 0; i < 100; ++i, ++baseline) {
    std::vector<double> r(1 + uniform_index(rng, 64));
    double sum = 0.0;
    for (double& v : r) sum += (v = 10.0 * standard_normal(rng));
    if (std::abs(update_baseline(r) - sum / static_cast<double>(r.size())) > 1e-12) failures.push_back("baseline");
  }
  {
    const TinyData d = tiny_data();
    TrainConfig t;
    t.sampler = SamplerKind::Rgan;
    t.epochs = 25;
    t.steps_per_epoch = 5;
    t.pretrain_epochs = 0;
    t.candidates = 4;
    t.snapshot_negatives = 100;
    const TrainResult r = adversarial_train(d.train, nullptr, d.model, t);
    if (*r.steps.front().baseline != 0.0) failures.push_back("initial baseline");
    for (std::size_t i = 1; i < r.steps.size(); ++i, ++baseline)
      if (*r.steps[i].baseline != *r.steps[i - 1].mean_reward) failures.push_back("trainer baseline");
  }

  for (; pava < 150; ++pava) {
    const std::size_t n = 1 + uniform_index(rng, 60);
    std::vector<double> y(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = uniform01(rng);
      w[i] = static_cast<double>(uniform_index(rng, 50));
    }
    w[uniform_index(rng, n)] = 1.0;
    const auto once = pava_fit(y, w);
    const auto twice = pava_fit(once, w);
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(once[i] - twice[i]) > 1e-12 || (i > 0 && once[i] < once[i - 1])) failures.push_back("pava");
  }

  std::set<std::string> distinct(failures.begin(), failures.end());
  std::string failed;
  for (const auto& f : distinct) failed += (failed.empty() ? "" : ", ") + f;
  return {failures.empty(),
          fmt("instances: attention simplex %d, unit circle %d, hinge flat region %d, baseline = batch mean %d, "
              "PAVA idempotence %d; failures: %s",
              simplex, circle, hinge, baseline, pava, failed.empty() ? "none" : failed.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                          criterion5, criterion6, criterion7, criterion8,
                                                          criterion9, criterion10};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  bool all = true;
  for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) {
    if (!selected.empty() && !selected.contains(k)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d: %s %s (%.1fs)\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
