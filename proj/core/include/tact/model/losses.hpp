#pragma once

#include <span>
#include <vector>

namespace tact {

struct LossResult {
  double value = 0.0;
  std::vector<double> grad;  ///< d value / d score, one per input score
};

/// Negated log-likelihood -Σ_pos log σ(f) - Σ_neg log(1 - σ(f)), with σ
/// clamped to [1e-12, 1 - 1e-12]. Throws ValidationError for labels outside {0, 1}.
LossResult pointwise_loss(std::span<const double> scores, std::span<const int> labels);

/// max(0, -f_pos + f_neg + γ). Throws ContractError for γ <= 0.
double pairwise_hinge(double f_pos, double f_neg, double gamma);

/// Subgradient of the hinge w.r.t. (f_pos, f_neg): (-1, +1) when active, (0, 0) otherwise.
struct HingeGrad {
  double d_pos = 0.0;
  double d_neg = 0.0;
};
HingeGrad pairwise_hinge_grad(double f_pos, double f_neg, double gamma);

}  // namespace tact
