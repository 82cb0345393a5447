#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tact/numeric/tensor.hpp"

namespace tact {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Moment estimates for one optimizer. The parameter list is bound on the
/// first step; later steps must pass the same parameters in the same order.
class AdamState {
 public:
  explicit AdamState(AdamConfig config = {});

  const AdamConfig& config() const { return config_; }
  void set_learning_rate(double lr) { config_.learning_rate = lr; }
  std::uint64_t steps() const { return step_; }

  const std::vector<Tensor>& first_moments() const { return m_; }
  const std::vector<Tensor>& second_moments() const { return v_; }

  /// Bias-corrected Adam update in place, then zeroes every gradient.
  void step(std::span<Parameter* const> params);

 private:
  AdamConfig config_;
  std::uint64_t step_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

inline void adam_step(std::span<Parameter* const> params, AdamState& state) { state.step(params); }

}  // namespace tact
