#include "tact/model/network.hpp"

#include <algorithm>

#include "tact/error.hpp"
#include "tact/numeric/ops.hpp"
#include "tact/numeric/random.hpp"

namespace tact {

Network::Network(const ModelConfig& config, std::uint64_t seed) : config_(config) {
  config_.validate();
  target_ = ItemEmbedder("target", config_);
  history_ = ItemEmbedder("history", config_);
  gru_ = GruStack("gru", config_.gru_layers, config_.item_dim, config_.hidden_dim);
  attention_ = Attention("attention", config_.hidden_dim, config_.item_dim, config_.attention_dim, config_.time_aware);
  if (config_.aux_in > 0) aux_W_ = Parameter("aux.W", {config_.aux_dim, config_.aux_in});
  aux_b_ = Parameter("aux.b", {config_.aux_dim});
  score_w_ = Parameter("score.w", {1, config_.sample_dim()});
  score_b_ = Parameter("score.b", {1});
  rebuild_index();
  Rng rng(seed);
  for (Parameter* p : params_) glorot_uniform(*p, rng);
}

Network::Network(const Network& other)
    : config_(other.config_),
      target_(other.target_),
      history_(other.history_),
      gru_(other.gru_),
      attention_(other.attention_),
      aux_W_(other.aux_W_),
      aux_b_(other.aux_b_),
      score_w_(other.score_w_),
      score_b_(other.score_b_) {
  rebuild_index();
}

Network::Network(Network&& other) noexcept
    : config_(std::move(other.config_)),
      target_(std::move(other.target_)),
      history_(std::move(other.history_)),
      gru_(std::move(other.gru_)),
      attention_(std::move(other.attention_)),
      aux_W_(std::move(other.aux_W_)),
      aux_b_(std::move(other.aux_b_)),
      score_w_(std::move(other.score_w_)),
      score_b_(std::move(other.score_b_)) {
  rebuild_index();
  other.params_.clear();
}

Network& Network::operator=(const Network& other) {
  if (this != &other) *this = Network(other);
  return *this;
}

Network& Network::operator=(Network&& other) noexcept {
  if (this != &other) {
    config_ = std::move(other.config_);
    target_ = std::move(other.target_);
    history_ = std::move(other.history_);
    gru_ = std::move(other.gru_);
    attention_ = std::move(other.attention_);
    aux_W_ = std::move(other.aux_W_);
    aux_b_ = std::move(other.aux_b_);
    score_w_ = std::move(other.score_w_);
    score_b_ = std::move(other.score_b_);
    rebuild_index();
    other.params_.clear();
  }
  return *this;
}

void Network::rebuild_index() {
  params_.clear();
  for (auto* group : {&target_, &history_}) {
    const auto p = group->parameters();
    params_.insert(params_.end(), p.begin(), p.end());
  }
  for (Parameter* p : gru_.parameters()) params_.push_back(p);
  for (Parameter* p : attention_.parameters()) params_.push_back(p);
  if (config_.aux_in > 0) params_.push_back(&aux_W_);
  params_.insert(params_.end(), {&aux_b_, &score_w_, &score_b_});
}

SampleEmbedding Network::embed(const Sample& s, SampleTrace* trace) const {
  const std::size_t L = config_.history_length;
  if (s.history.size() != L) {
    throw ValidationError("history has " + std::to_string(s.history.size()) + " items, expected " +
                          std::to_string(L));
  }
  if (s.aux.size() != config_.aux_in) {
    throw ValidationError("aux vector has " + std::to_string(s.aux.size()) + " entries, expected " +
                          std::to_string(config_.aux_in));
  }
  std::size_t first = 0;
  while (first < L && s.history[first].padding) ++first;
  if (first == L) throw ValidationError("history consists of padding only");

  SampleTrace local;
  SampleTrace& t = trace != nullptr ? *trace : local;
  const bool keep = trace != nullptr;

  SampleEmbedding e;
  e.item = target_.forward(s.target, keep ? &t.target : nullptr);

  t.first_real = first;
  t.history.assign(keep ? L - first : 0, {});
  t.history_items.resize(L - first);
  for (std::size_t l = first; l < L; ++l) {
    t.history_items[l - first] = history_.forward(s.history[l], keep ? &t.history[l - first] : nullptr);
  }
  std::vector<Tensor> top = gru_.forward(t.history_items, keep ? &t.gru : nullptr);

  t.states.assign(L, Tensor(Shape{config_.hidden_dim}));
  std::vector<bool> mask(L, true);
  for (std::size_t l = first; l < L; ++l) {
    t.states[l] = std::move(top[l - first]);
    mask[l] = false;
  }
  t.times.clear();
  if (config_.time_aware) {
    t.times.assign(L, Tensor(Shape{config_.item_dim}));
    for (std::size_t l = first; l < L; ++l) {
      t.times[l] = relative_time_encoding(s.target.time.absolute, s.history[l].time.absolute, config_.item_dim);
    }
  }
  e.history = attention_.forward(t.states, e.item, t.times, mask, keep ? &t.attention : nullptr);

  t.aux_in = Tensor::vector(s.aux);
  Tensor pre = aux_b_.value;
  if (config_.aux_in > 0) ops::kernel::gemv_acc(aux_W_.value.data(), config_.aux_dim, config_.aux_in, s.aux.data(), pre.data());
  e.aux = ops::tanh(pre);

  e.sample = Tensor(Shape{config_.sample_dim()});
  std::copy(e.history.values().begin(), e.history.values().end(), e.sample.data());
  std::copy(e.item.values().begin(), e.item.values().end(), e.sample.data() + config_.hidden_dim);
  std::copy(e.aux.values().begin(), e.aux.values().end(), e.sample.data() + config_.hidden_dim + config_.item_dim);
  if (keep) t.embedding = e;
  return e;
}

double Network::score(const Tensor& sample_embedding) const {
  if (sample_embedding.size() != config_.sample_dim()) {
    throw ConfigError("score head expects " + std::to_string(config_.sample_dim()) + " inputs, got " +
                      std::to_string(sample_embedding.size()));
  }
  return score_b_.value[0] + ops::kernel::dot(score_w_.value.data(), sample_embedding.data(), sample_embedding.size());
}

Tensor Network::score_backward(const Tensor& sample_embedding, double d_score) {
  const std::size_t S = sample_embedding.size();
  Tensor d(Shape{S});
  for (std::size_t i = 0; i < S; ++i) {
    score_w_.grad[i] += d_score * sample_embedding[i];
    d[i] = d_score * score_w_.value[i];
  }
  score_b_.grad[0] += d_score;
  return d;
}

void Network::embed_backward(const SampleTrace& t, const Tensor& d_sample) {
  const std::size_t H = config_.hidden_dim;
  const std::size_t D = config_.item_dim;
  const std::size_t L = config_.history_length;

  Tensor d_history(Shape{H}), d_item(Shape{D}), d_aux(Shape{config_.aux_dim});
  std::copy(d_sample.data(), d_sample.data() + H, d_history.data());
  std::copy(d_sample.data() + H, d_sample.data() + H + D, d_item.data());
  std::copy(d_sample.data() + H + D, d_sample.data() + d_sample.size(), d_aux.data());

  const Tensor d_aux_pre = ops::activate_backward(ops::Activation::Tanh, t.embedding.aux, d_aux);
  for (std::size_t i = 0; i < d_aux_pre.size(); ++i) aux_b_.grad[i] += d_aux_pre[i];
  if (config_.aux_in > 0) ops::matvec_backward(t.aux_in, aux_W_, d_aux_pre, nullptr);

  std::vector<Tensor> d_states(L);
  attention_.backward(t.states, t.embedding.item, t.times, t.attention, d_history, d_states, d_item);

  std::vector<Tensor> d_top(d_states.begin() + static_cast<std::ptrdiff_t>(t.first_real), d_states.end());
  const std::vector<Tensor> d_items = gru_.backward(t.gru, d_top);
  for (std::size_t k = 0; k < d_items.size(); ++k) history_.backward(t.history[k], d_items[k]);
  target_.backward(t.target, d_item);
}

void Network::backward_score(const SampleTrace& trace, double d_score) {
  embed_backward(trace, score_backward(trace.embedding.sample, d_score));
}

std::vector<Parameter*> Network::parameters() { return params_; }

std::vector<const Parameter*> Network::parameters() const { return {params_.begin(), params_.end()}; }

void Network::zero_grad() {
  for (Parameter* p : params_) p->zero_grad();
}

Parameter* Network::find(const std::string& name) {
  for (Parameter* p : params_) {
    if (p->name == name) return p;
  }
  return nullptr;
}

}  // namespace tact
