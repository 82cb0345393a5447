#include "tact/model/losses.hpp"

#include <algorithm>
#include <cmath>

#include "tact/error.hpp"
#include "tact/numeric/ops.hpp"

namespace tact {

LossResult pointwise_loss(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ConfigError("pointwise loss: scores and labels differ in length");
  LossResult out;
  out.grad.resize(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double p = std::clamp(ops::sigmoid(scores[i]), 1e-12, 1.0 - 1e-12);
    if (labels[i] == 1) {
      out.value -= std::log(p);
      out.grad[i] = p - 1.0;
    } else if (labels[i] == 0) {
      out.value -= std::log(1.0 - p);
      out.grad[i] = p;
    } else {
      throw ValidationError("pointwise loss: label " + std::to_string(labels[i]) + " is not binary");
    }
  }
  return out;
}

double pairwise_hinge(double f_pos, double f_neg, double gamma) {
  if (!(gamma > 0.0)) throw ContractError("hinge margin must be positive");
  return std::max(0.0, -f_pos + f_neg + gamma);
}

HingeGrad pairwise_hinge_grad(double f_pos, double f_neg, double gamma) {
  if (pairwise_hinge(f_pos, f_neg, gamma) > 0.0) return {-1.0, 1.0};
  return {};
}

}  // namespace tact
