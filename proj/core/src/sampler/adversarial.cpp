#include "tact/sampler/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tact/error.hpp"
#include "tact/model/losses.hpp"
#include "tact/numeric/ops.hpp"

namespace tact {

namespace {

double norm(const Tensor& t) { return std::sqrt(ops::kernel::dot(t.data(), t.data(), t.size())); }

void require_temperature(double temperature) {
  if (!(temperature > 0.0)) throw ContractError("policy temperature must be positive");
}

}  // namespace

std::vector<double> policy_logits(const Tensor& anchor, std::span<const Tensor> candidates, double temperature) {
  require_temperature(temperature);
  std::vector<double> z(candidates.size(), 0.0);
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const Tensor& c = candidates[k];
    if (c.size() != anchor.size()) throw ConfigError("policy: candidate embedding width differs from anchor");
    const double n = norm(c);
    if (n == 0.0) continue;
    z[k] = ops::kernel::dot(c.data(), anchor.data(), c.size()) / (temperature * n);
  }
  return z;
}

std::vector<double> policy_distribution(const Tensor& anchor, std::span<const Tensor> candidates,
                                        double temperature) {
  if (candidates.empty()) throw ContractError("policy over an empty candidate set");
  const Tensor p = ops::softmax(Tensor::vector(policy_logits(anchor, candidates, temperature)));
  return {p.values().begin(), p.values().end()};
}

void policy_logits_backward(const Tensor& anchor, std::span<const Tensor> candidates, double temperature,
                            std::span<const double> d_logits, Tensor& d_anchor, std::vector<Tensor>& d_candidates) {
  require_temperature(temperature);
  if (d_anchor.empty()) d_anchor = Tensor(anchor.shape());
  d_candidates.resize(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const Tensor& c = candidates[k];
    if (d_candidates[k].empty()) d_candidates[k] = Tensor(c.shape());
    const double n = norm(c);
    if (n == 0.0 || d_logits[k] == 0.0) continue;
    const double g = d_logits[k] / (temperature * n);
    const double proj = ops::kernel::dot(c.data(), anchor.data(), c.size()) / (n * n);
    for (std::size_t i = 0; i < c.size(); ++i) {
      d_anchor[i] += g * c[i];
      d_candidates[k][i] += g * (anchor[i] - proj * c[i]);
    }
  }
}

std::size_t sample_action(std::span<const double> p, Rng& rng) {
  if (p.empty()) throw ContractError("cannot sample from an empty distribution");
  if (p.size() == 1) return 0;
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    acc += p[k];
    if (u < acc) return k;
  }
  return p.size() - 1;
}

double compute_penalty(const SampleEmbedding& s, const SampleEmbedding& s_prime, double lambda_item,
                       double lambda_history) {
  double out = 0.0;
  if (lambda_item != 0.0) out += lambda_item * ops::l2_distance(s.item, s_prime.item);
  if (lambda_history != 0.0) out += lambda_history * ops::l2_distance(s.history, s_prime.history);
  return out;
}

namespace {

bool same_user_part(const Sample& a, const Sample& b) {
  return a.user == b.user && a.history == b.history && a.aux == b.aux;
}

}  // namespace

double compute_reward(const Sample& s, const SampleEmbedding& e_s, const Sample& s_prime,
                      const SampleEmbedding& e_s_prime, double score_s_prime, const RewardConfig& config) {
  const double score = config.include_score ? score_s_prime : 0.0;
  if (config.mode == RewardMode::WithoutNegatives) {
    if (!same_user_part(s, s_prime)) {
      throw ContractError("reward without negatives needs s' to share the positive's user part");
    }
    return score - compute_penalty(e_s, e_s_prime, config.lambda_item, 0.0);
  }
  return score - compute_penalty(e_s, e_s_prime, config.lambda_item, config.lambda_history);
}

double compute_reward(const Network& discriminator, const Sample& s, const Sample& s_prime,
                      const RewardConfig& config) {
  const SampleEmbedding e = discriminator.embed(s);
  const SampleEmbedding e_prime = discriminator.embed(s_prime);
  return compute_reward(s, e, s_prime, e_prime, discriminator.score(e_prime), config);
}

double update_baseline(std::span<const double> rewards) {
  if (rewards.empty()) throw ContractError("baseline of an empty reward batch");
  return std::accumulate(rewards.begin(), rewards.end(), 0.0) / static_cast<double>(rewards.size());
}

GeneratorState::GeneratorState(Network network, double t, double decay, AdamConfig opt)
    : net(std::move(network)), temperature(t), temperature_decay(decay), optimizer(opt) {
  require_temperature(t);
  if (!(decay > 0.0 && decay <= 1.0)) throw ConfigError("temperature decay must lie in (0, 1]");
}

void GeneratorState::anneal() { temperature *= temperature_decay; }

PolicyEpisode open_episode(const Network& generator, const Sample& positive, std::span<const Sample* const> candidates,
                           double temperature) {
  PolicyEpisode ep;
  generator.embed(positive, &ep.anchor);
  ep.candidates.resize(candidates.size());
  std::vector<Tensor> embeddings;
  embeddings.reserve(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    generator.embed(*candidates[k], &ep.candidates[k]);
    embeddings.push_back(ep.candidates[k].embedding.sample);
  }
  ep.probabilities = policy_distribution(ep.anchor.embedding.sample, embeddings, temperature);
  return ep;
}

double accumulate_policy_gradient(Network& generator, double temperature, std::span<const PolicyEpisode> episodes,
                                  double baseline) {
  if (episodes.empty()) return 0.0;
  const double batch = static_cast<double>(episodes.size());
  double surrogate = 0.0;
  for (const PolicyEpisode& ep : episodes) {
    if (ep.actions.size() != ep.rewards.size() || ep.actions.empty()) {
      throw ContractError("policy episode needs one reward per action");
    }
    const double K = static_cast<double>(ep.actions.size());
    const std::size_t C = ep.probabilities.size();
    // d(surrogate)/dz_j = (1/K) Σ_k (r_k - b) ([j = a_k] - p_j)
    std::vector<double> dz(C, 0.0);
    bool any = false;
    for (std::size_t k = 0; k < ep.actions.size(); ++k) {
      const double adv = ep.rewards[k] - baseline;
      const std::size_t a = ep.actions[k];
      surrogate += std::log(std::max(ep.probabilities[a], 1e-300)) * adv / K / batch;
      if (adv == 0.0) continue;
      any = true;
      for (std::size_t j = 0; j < C; ++j) dz[j] -= adv * ep.probabilities[j] / K;
      dz[a] += adv / K;
    }
    if (!any) continue;
    for (double& v : dz) v = -v / batch;  // minimise the negated surrogate

    std::vector<Tensor> embeddings;
    embeddings.reserve(C);
    for (const SampleTrace& t : ep.candidates) embeddings.push_back(t.embedding.sample);
    Tensor d_anchor;
    std::vector<Tensor> d_candidates;
    policy_logits_backward(ep.anchor.embedding.sample, embeddings, temperature, dz, d_anchor, d_candidates);
    generator.embed_backward(ep.anchor, d_anchor);
    for (std::size_t j = 0; j < C; ++j) generator.embed_backward(ep.candidates[j], d_candidates[j]);
  }
  return surrogate;
}

double generator_step(GeneratorState& g, std::span<const PolicyEpisode> episodes) {
  g.net.zero_grad();
  const double surrogate = accumulate_policy_gradient(g.net, g.temperature, episodes, g.baseline);
  const bool any = std::any_of(episodes.begin(), episodes.end(), [&](const PolicyEpisode& ep) {
    return std::any_of(ep.rewards.begin(), ep.rewards.end(), [&](double r) { return r != g.baseline; });
  });
  if (any) {
    auto params = g.net.parameters();
    g.optimizer.step(params);
  }
  return surrogate;
}

double discriminator_step(Network& d, AdamState& optimizer, std::span<const Sample* const> positives,
                          std::span<const Sample* const> negatives, double gamma) {
  if (positives.size() != negatives.size() || positives.empty()) {
    throw ContractError("discriminator step needs matching, nonempty positive and negative lists");
  }
  d.zero_grad();
  const double scale = 1.0 / static_cast<double>(positives.size());
  double loss = 0.0;
  bool any = false;
  SampleTrace pos_trace, neg_trace;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    d.embed(*positives[i], &pos_trace);
    d.embed(*negatives[i], &neg_trace);
    const double f_pos = d.score(pos_trace.embedding);
    const double f_neg = d.score(neg_trace.embedding);
    const double h = pairwise_hinge(f_pos, f_neg, gamma);
    loss += h * scale;
    if (h <= 0.0) continue;
    any = true;
    const HingeGrad g = pairwise_hinge_grad(f_pos, f_neg, gamma);
    d.backward_score(pos_trace, g.d_pos * scale);
    d.backward_score(neg_trace, g.d_neg * scale);
  }
  if (any) {
    auto params = d.parameters();
    optimizer.step(params);
  }
  return loss;
}

double pointwise_step(Network& d, AdamState& optimizer, std::span<const Sample* const> samples) {
  if (samples.empty()) throw ContractError("pointwise step on an empty batch");
  d.zero_grad();
  const double scale = 1.0 / static_cast<double>(samples.size());
  double total = 0.0;
  SampleTrace trace;
  for (const Sample* s : samples) {
    d.embed(*s, &trace);
    const double score = d.score(trace.embedding);
    const LossResult loss = pointwise_loss(std::span<const double>(&score, 1), std::span<const int>(&s->label, 1));
    total += loss.value;
    d.backward_score(trace, loss.grad[0] * scale);
  }
  auto params = d.parameters();
  optimizer.step(params);
  return total * scale;
}

}  // namespace tact
