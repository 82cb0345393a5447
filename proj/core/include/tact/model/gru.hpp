#pragma once

#include <string>
#include <vector>

#include "tact/numeric/tensor.hpp"

namespace tact {

struct GruStepTrace {
  Tensor x, h_prev, r, z, c, rh, h;
};

/// One GRU layer:
///   r = σ(W_er x + W_hr h + b_r), z = σ(W_ez x + W_hz h + b_z)
///   c = tanh(W_ec x + W_hc (r ⊙ h) + b_c), h' = (1 - z) ⊙ h + z ⊙ c
class GruLayer {
 public:
  GruLayer() = default;
  GruLayer(const std::string& prefix, std::size_t input_dim, std::size_t hidden_dim);

  std::size_t hidden_dim() const { return b_r_.value.size(); }

  /// Runs the recurrence from h_0 = 0 and returns h_1..h_L.
  std::vector<Tensor> forward(const std::vector<Tensor>& inputs, std::vector<GruStepTrace>* trace = nullptr) const;

  /// Backpropagation through time. `d_states[l]` is the gradient arriving at
  /// h_l from outside the recurrence; returns the gradients of the inputs.
  std::vector<Tensor> backward(const std::vector<GruStepTrace>& trace, const std::vector<Tensor>& d_states);

  std::vector<Parameter*> parameters();

 private:
  Parameter W_er_, W_hr_, b_r_;
  Parameter W_ez_, W_hz_, b_z_;
  Parameter W_ec_, W_hc_, b_c_;
};

/// Stacked GRU; layer k + 1 consumes the states of layer k.
class GruStack {
 public:
  GruStack() = default;
  GruStack(const std::string& prefix, std::size_t layers, std::size_t input_dim, std::size_t hidden_dim);

  std::size_t layers() const { return layers_.size(); }

  /// Top-layer states h_1..h_L.
  std::vector<Tensor> forward(const std::vector<Tensor>& inputs,
                              std::vector<std::vector<GruStepTrace>>* trace = nullptr) const;
  std::vector<Tensor> backward(const std::vector<std::vector<GruStepTrace>>& trace,
                               const std::vector<Tensor>& d_top);

  std::vector<Parameter*> parameters();

 private:
  std::vector<GruLayer> layers_;
};

}  // namespace tact
