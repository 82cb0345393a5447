#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tact/model/network.hpp"
#include "tact/numeric/adam.hpp"
#include "tact/numeric/random.hpp"
#include "tact/sampler/kinds.hpp"

namespace tact {

/// z_k = e_kᵀ e_s / (T ‖e_k‖), with z_k = 0 for a zero-norm candidate.
/// Throws ContractError for T <= 0.
std::vector<double> policy_logits(const Tensor& anchor, std::span<const Tensor> candidates, double temperature);

/// softmax of policy_logits.
std::vector<double> policy_distribution(const Tensor& anchor, std::span<const Tensor> candidates,
                                        double temperature);

/// Accumulates the gradients of Σ_k d_logits[k] z_k into `d_anchor` and `d_candidates`.
void policy_logits_backward(const Tensor& anchor, std::span<const Tensor> candidates, double temperature,
                            std::span<const double> d_logits, Tensor& d_anchor, std::vector<Tensor>& d_candidates);

/// Categorical draw from `p`. Consumes one uniform01 draw, or none when |p| == 1.
std::size_t sample_action(std::span<const double> p, Rng& rng);

/// λ_i ‖e_i(s) - e_i(s')‖ + λ_h ‖e_h(s) - e_h(s')‖ in the discriminator's embedding space.
double compute_penalty(const SampleEmbedding& s, const SampleEmbedding& s_prime, double lambda_item,
                       double lambda_history);

/// With negatives: f_D(s') - penalty. Without negatives: f_D(s') - λ_i ‖e_i(s) - e_i(s')‖,
/// and s' must share s's user and history (ContractError otherwise).
/// `include_score = false` drops the f_D(s') term.
double compute_reward(const Sample& s, const SampleEmbedding& e_s, const Sample& s_prime,
                      const SampleEmbedding& e_s_prime, double score_s_prime, const RewardConfig& config);
double compute_reward(const Network& discriminator, const Sample& s, const Sample& s_prime,
                      const RewardConfig& config);

/// Arithmetic mean. Throws ContractError for an empty batch.
double update_baseline(std::span<const double> rewards);

/// Generator network, temperature and REINFORCE baseline.
struct GeneratorState {
  GeneratorState(Network net, double temperature, double decay, AdamConfig optimizer);

  Network net;
  double temperature;
  double temperature_decay;
  double baseline = 0.0;
  AdamState optimizer;

  void anneal();
};

/// One positive's candidate set and the actions drawn from the policy.
struct PolicyEpisode {
  SampleTrace anchor;
  std::vector<SampleTrace> candidates;
  std::vector<double> probabilities;
  std::vector<std::size_t> actions;  ///< K draws
  std::vector<double> rewards;       ///< one per action
};

/// Embeds anchor and candidates with the generator and fills `probabilities`.
PolicyEpisode open_episode(const Network& generator, const Sample& positive, std::span<const Sample* const> candidates,
                           double temperature);

/// Accumulates into the generator's gradients the negated REINFORCE surrogate
///   -(1/B) Σ_i (1/K) Σ_k log p(a_ik | s_i) (r_ik - b)
/// and returns the surrogate itself (without the minus sign).
double accumulate_policy_gradient(Network& generator, double temperature, std::span<const PolicyEpisode> episodes,
                                  double baseline);

/// accumulate_policy_gradient followed by one Adam step. When every advantage
/// r - b is zero the gradient is zero and the parameters are left untouched.
double generator_step(GeneratorState& g, std::span<const PolicyEpisode> episodes);

/// One step on the batch-mean hinge max(0, γ - f(s) + f(s')). Returns the loss
/// before the update. The optimizer is skipped when every pair is inactive.
double discriminator_step(Network& d, AdamState& optimizer, std::span<const Sample* const> positives,
                          std::span<const Sample* const> negatives, double gamma);

/// One step on the batch-mean negated log-likelihood. Returns the loss before the update.
double pointwise_step(Network& d, AdamState& optimizer, std::span<const Sample* const> samples);

}  // namespace tact
