#include "tact/model/item_embedder.hpp"

#include <algorithm>

#include "tact/error.hpp"
#include "tact/numeric/ops.hpp"

namespace tact {

ItemEmbedder::ItemEmbedder(const std::string& prefix, const ModelConfig& config)
    : raw_dim_(config.raw_dim), onehot_dim_(config.onehot_dim), time_aware_(config.time_aware) {
  const std::size_t o = config.onehot_dim;
  W_c_ = Parameter(prefix + ".W_c", {o, config.category_vocab});
  if (time_aware_) {
    W_m_ = Parameter(prefix + ".W_m", {o, kMonthVocab});
    W_w_ = Parameter(prefix + ".W_w", {o, kWeekVocab});
    W_d_ = Parameter(prefix + ".W_d", {o, kDayVocab});
    W_h_ = Parameter(prefix + ".W_h", {o, kHourVocab});
  }
  input_dim_ = raw_dim_ + o + (time_aware_ ? 4 * o : 0);
  const std::array<std::size_t, 4> widths = {input_dim_, config.ff_width, config.ff_width, config.item_dim};
  for (std::size_t k = 0; k < 3; ++k) {
    F_W_[k] = Parameter(prefix + ".F" + std::to_string(k + 1) + ".W", {widths[k + 1], widths[k]});
    F_b_[k] = Parameter(prefix + ".F" + std::to_string(k + 1) + ".b", {widths[k + 1]});
  }
}

namespace {

void project_relu(const Parameter& W, std::size_t index, double* out) {
  const std::size_t rows = W.value.rows();
  const std::size_t cols = W.value.cols();
  for (std::size_t r = 0; r < rows; ++r) out[r] = std::max(0.0, W.value[r * cols + index]);
}

void project_relu_backward(Parameter& W, std::size_t index, const double* y, const double* dy) {
  const std::size_t rows = W.value.rows();
  const std::size_t cols = W.value.cols();
  for (std::size_t r = 0; r < rows; ++r) {
    if (y[r] > 0.0) W.grad[r * cols + index] += dy[r];
  }
}

}  // namespace

Tensor ItemEmbedder::forward(const ItemRecord& item, ItemTrace* trace) const {
  if (item.cid3 >= W_c_.value.cols()) {
    throw ValidationError("cid3 " + std::to_string(item.cid3) + " outside category vocabulary of size " +
                          std::to_string(W_c_.value.cols()));
  }
  if (!item.raw || item.raw->size() != raw_dim_) {
    throw ValidationError("raw feature vector must have " + std::to_string(raw_dim_) + " entries");
  }
  if (time_aware_ && !in_range(item.time)) throw ValidationError("time indices out of range");

  Tensor input(Shape{input_dim_});
  std::copy(item.raw->begin(), item.raw->end(), input.data());
  double* cursor = input.data() + raw_dim_;
  project_relu(W_c_, item.cid3, cursor);
  if (time_aware_) {
    cursor += onehot_dim_;
    project_relu(W_m_, static_cast<std::size_t>(item.time.month), cursor);
    project_relu(W_w_, static_cast<std::size_t>(item.time.week), cursor + onehot_dim_);
    project_relu(W_d_, static_cast<std::size_t>(item.time.day), cursor + 2 * onehot_dim_);
    project_relu(W_h_, static_cast<std::size_t>(item.time.hour), cursor + 3 * onehot_dim_);
  }

  Tensor h1 = ops::relu(ops::affine(input, F_W_[0], F_b_[0]));
  Tensor h2 = ops::relu(ops::affine(h1, F_W_[1], F_b_[1]));
  Tensor out = ops::tanh(ops::affine(h2, F_W_[2], F_b_[2]));
  if (trace != nullptr) {
    trace->cid3 = item.cid3;
    trace->time = item.time;
    trace->input = std::move(input);
    trace->layers = {std::move(h1), std::move(h2), out};
  }
  return out;
}

void ItemEmbedder::backward(const ItemTrace& trace, const Tensor& d_out) {
  Tensor d3 = ops::activate_backward(ops::Activation::Tanh, trace.layers[2], d_out);
  Tensor dh2;
  ops::affine_backward(trace.layers[1], F_W_[2], F_b_[2], d3, &dh2);
  Tensor d2 = ops::activate_backward(ops::Activation::Relu, trace.layers[1], dh2);
  Tensor dh1;
  ops::affine_backward(trace.layers[0], F_W_[1], F_b_[1], d2, &dh1);
  Tensor d1 = ops::activate_backward(ops::Activation::Relu, trace.layers[0], dh1);
  Tensor dinput;
  ops::affine_backward(trace.input, F_W_[0], F_b_[0], d1, &dinput);

  const double* y = trace.input.data() + raw_dim_;
  const double* dy = dinput.data() + raw_dim_;
  project_relu_backward(W_c_, trace.cid3, y, dy);
  if (time_aware_) {
    const std::size_t o = onehot_dim_;
    project_relu_backward(W_m_, static_cast<std::size_t>(trace.time.month), y + o, dy + o);
    project_relu_backward(W_w_, static_cast<std::size_t>(trace.time.week), y + 2 * o, dy + 2 * o);
    project_relu_backward(W_d_, static_cast<std::size_t>(trace.time.day), y + 3 * o, dy + 3 * o);
    project_relu_backward(W_h_, static_cast<std::size_t>(trace.time.hour), y + 4 * o, dy + 4 * o);
  }
}

std::vector<Parameter*> ItemEmbedder::parameters() {
  std::vector<Parameter*> out = {&W_c_};
  if (time_aware_) out.insert(out.end(), {&W_m_, &W_w_, &W_d_, &W_h_});
  for (std::size_t k = 0; k < 3; ++k) out.insert(out.end(), {&F_W_[k], &F_b_[k]});
  return out;
}

}  // namespace tact
