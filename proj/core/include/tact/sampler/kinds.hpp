#pragma once

#include <string_view>
#include <vector>

namespace tact {

enum class SamplerKind {
  Uniform,          ///< pairwise, uniform observed negative
  UnderSample,      ///< pointwise on all positives plus a 1:ratio negative subset
  UserFixed,        ///< pairwise, negative of the same user when one exists
  Pointwise,        ///< pointwise on the full training set (logistic-regression style)
  Rgan,             ///< regularized adversarial sampling
  RganScoreOnly,    ///< reward without the distance penalty
  RganPenaltyOnly,  ///< reward without the score term
  IrganStyle,       ///< adversarial sampling over constructed nonpositives
};

std::string_view sampler_name(SamplerKind kind);
/// Throws ConfigError for an unknown name.
SamplerKind parse_sampler_kind(std::string_view name);
const std::vector<SamplerKind>& all_sampler_kinds();

bool uses_generator(SamplerKind kind);
bool uses_pointwise_loss(SamplerKind kind);

enum class RewardMode { WithNegatives, WithoutNegatives };

struct RewardConfig {
  double lambda_item = 3.0;
  double lambda_history = 5.0;
  RewardMode mode = RewardMode::WithNegatives;
  bool include_score = true;
};

/// Reward settings implied by an adversarial sampler kind.
RewardConfig reward_config_for(SamplerKind kind, double lambda_item, double lambda_history);

}  // namespace tact
