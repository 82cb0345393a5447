#include "tact/numeric/adam.hpp"

#include <cmath>

#include "tact/error.hpp"

namespace tact {

AdamState::AdamState(AdamConfig config) : config_(config) {
  if (!(config_.learning_rate > 0.0) || !(config_.beta1 >= 0.0 && config_.beta1 < 1.0) ||
      !(config_.beta2 >= 0.0 && config_.beta2 < 1.0) || !(config_.epsilon > 0.0)) {
    throw ConfigError("invalid Adam hyper-parameters");
  }
}

void AdamState::step(std::span<Parameter* const> params) {
  if (m_.empty()) {
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const Parameter* p : params) {
      m_.emplace_back(p->value.shape());
      v_.emplace_back(p->value.shape());
    }
  }
  if (params.size() != m_.size()) {
    throw ContractError("Adam state was bound to " + std::to_string(m_.size()) + " parameters, got " +
                        std::to_string(params.size()));
  }

  ++step_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  const double lr = config_.learning_rate;
  const double eps = config_.epsilon;

  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    if (p.value.shape() != m_[k].shape()) {
      throw ContractError("Adam: parameter '" + p.name + "' changed shape");
    }
    double* theta = p.value.data();
    double* g = p.grad.data();
    double* m = m_[k].data();
    double* v = v_[k].data();
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      theta[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
      g[i] = 0.0;
    }
  }
}

}  // namespace tact
