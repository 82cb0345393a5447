#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tact/numeric/tensor.hpp"

namespace tact {

/// e[2j] = sin(Δ / 10000^(2j/d)), e[2j+1] = cos(Δ / 10000^(2j/d)) with
/// Δ = t0 - tl in seconds. Throws ValidationError when tl > t0 and
/// ConfigError for an odd or zero d.
Tensor relative_time_encoding(std::int64_t t0, std::int64_t tl, std::size_t d);

struct AttentionTrace {
  std::vector<Tensor> activations;  ///< tanh(W_h h_l + W_i e_i0 + W_t e_t_l) per unmasked position
  std::vector<double> weights;      ///< a_l, zero at masked positions
  std::vector<bool> mask;           ///< true = padded
};

/// u_l = vᵀ tanh(W_h h_l + W_i e_i0 + W_t e_t_l), a = softmax(u) over unmasked
/// positions, e_h = Σ a_l h_l. Without time awareness the W_t term is absent.
class Attention {
 public:
  Attention() = default;
  Attention(const std::string& prefix, std::size_t hidden_dim, std::size_t item_dim, std::size_t attention_dim,
            bool time_aware);

  bool time_aware() const { return time_aware_; }

  /// `mask[l]` is true for padded positions; `times` may be empty when not time aware.
  /// Throws ValidationError when every position is masked.
  Tensor forward(const std::vector<Tensor>& states, const Tensor& target, const std::vector<Tensor>& times,
                 const std::vector<bool>& mask, AttentionTrace* trace = nullptr) const;

  /// Accumulates parameter gradients; adds into `d_states` (one per position) and `d_target`.
  void backward(const std::vector<Tensor>& states, const Tensor& target, const std::vector<Tensor>& times,
                const AttentionTrace& trace, const Tensor& d_out, std::vector<Tensor>& d_states, Tensor& d_target);

  std::vector<Parameter*> parameters();

 private:
  bool time_aware_ = true;
  Parameter W_h_, W_i_, W_t_, v_;
};

}  // namespace tact
