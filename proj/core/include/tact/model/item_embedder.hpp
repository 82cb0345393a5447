#pragma once

#include <array>
#include <string>
#include <vector>

#include "tact/data/sample.hpp"
#include "tact/model/config.hpp"
#include "tact/numeric/tensor.hpp"

namespace tact {

/// Intermediate values of one item embedding, kept for the backward pass.
struct ItemTrace {
  std::size_t cid3 = 0;
  TimeSignals time;
  Tensor input;                     ///< concat(e^r, e^c, e^t)
  std::array<Tensor, 3> layers;     ///< post-activation output of each layer of F
};

/// e^i = F(concat(e^r, ReLU(W_c onehot(cid3)), ReLU(concat(W_m.., W_w.., W_d.., W_h..)))).
/// F has two ReLU hidden layers and a tanh output layer.
class ItemEmbedder {
 public:
  ItemEmbedder() = default;
  ItemEmbedder(const std::string& prefix, const ModelConfig& config);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return F_W_[2].value.rows(); }

  /// Throws ValidationError for a cid3 outside the vocabulary or a raw vector of the wrong width.
  Tensor forward(const ItemRecord& item, ItemTrace* trace = nullptr) const;
  void backward(const ItemTrace& trace, const Tensor& d_out);

  std::vector<Parameter*> parameters();

 private:
  std::size_t raw_dim_ = 0;
  std::size_t onehot_dim_ = 0;
  std::size_t input_dim_ = 0;
  bool time_aware_ = true;
  Parameter W_c_, W_m_, W_w_, W_d_, W_h_;
  std::array<Parameter, 3> F_W_, F_b_;
};

}  // namespace tact
