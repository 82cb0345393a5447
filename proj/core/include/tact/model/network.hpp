#pragma once

#include <cstdint>
#include <vector>

#include "tact/data/sample.hpp"
#include "tact/model/attention.hpp"
#include "tact/model/config.hpp"
#include "tact/model/gru.hpp"
#include "tact/model/item_embedder.hpp"
#include "tact/numeric/tensor.hpp"

namespace tact {

/// e_s = concat(e_h, e_i0, e_a).
struct SampleEmbedding {
  Tensor history;  ///< e_h
  Tensor item;     ///< e_i0
  Tensor aux;      ///< e_a
  Tensor sample;   ///< e_s
};

/// Everything the backward pass of one sample needs.
struct SampleTrace {
  ItemTrace target;
  std::vector<ItemTrace> history;        ///< real (unpadded) positions only
  std::vector<Tensor> history_items;     ///< their item embeddings
  std::size_t first_real = 0;            ///< index of the first unpadded position
  std::vector<std::vector<GruStepTrace>> gru;
  std::vector<Tensor> states;            ///< top GRU states, zero at padded positions
  std::vector<Tensor> times;             ///< relative-time encodings
  AttentionTrace attention;
  Tensor aux_in;
  SampleEmbedding embedding;
};

/// The time-aware attention network with a linear score head.
class Network {
 public:
  Network() = default;
  /// Builds the network and draws Glorot-uniform weights from `seed`; biases start at zero.
  Network(const ModelConfig& config, std::uint64_t seed);

  Network(const Network& other);
  Network& operator=(const Network& other);
  Network(Network&& other) noexcept;
  Network& operator=(Network&& other) noexcept;

  const ModelConfig& config() const { return config_; }

  SampleEmbedding embed(const Sample& s, SampleTrace* trace = nullptr) const;

  /// f(e_s) = wᵀ e_s + b.
  double score(const Tensor& sample_embedding) const;
  double score(const SampleEmbedding& e) const { return score(e.sample); }
  double score(const Sample& s) const { return score(embed(s).sample); }

  /// Accumulates score-head gradients for df = `d_score` and returns d e_s.
  Tensor score_backward(const Tensor& sample_embedding, double d_score);

  /// Accumulates gradients for an upstream gradient on e_s.
  void embed_backward(const SampleTrace& trace, const Tensor& d_sample);

  /// Gradient of `d_score · f(embed(s))` into every parameter.
  void backward_score(const SampleTrace& trace, double d_score);

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  void zero_grad();

  Parameter* find(const std::string& name);

 private:
  void rebuild_index();

  ModelConfig config_;
  ItemEmbedder target_;
  ItemEmbedder history_;
  GruStack gru_;
  Attention attention_;
  Parameter aux_W_, aux_b_;
  Parameter score_w_, score_b_;
  std::vector<Parameter*> params_;
};

}  // namespace tact
