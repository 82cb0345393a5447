#include "tact/model/gru.hpp"

#include <cmath>

#include "tact/error.hpp"
#include "tact/numeric/ops.hpp"

namespace tact {

GruLayer::GruLayer(const std::string& prefix, std::size_t input_dim, std::size_t hidden_dim)
    : W_er_(prefix + ".W_er", {hidden_dim, input_dim}),
      W_hr_(prefix + ".W_hr", {hidden_dim, hidden_dim}),
      b_r_(prefix + ".b_r", {hidden_dim}),
      W_ez_(prefix + ".W_ez", {hidden_dim, input_dim}),
      W_hz_(prefix + ".W_hz", {hidden_dim, hidden_dim}),
      b_z_(prefix + ".b_z", {hidden_dim}),
      W_ec_(prefix + ".W_ec", {hidden_dim, input_dim}),
      W_hc_(prefix + ".W_hc", {hidden_dim, hidden_dim}),
      b_c_(prefix + ".b_c", {hidden_dim}) {}

std::vector<Tensor> GruLayer::forward(const std::vector<Tensor>& inputs, std::vector<GruStepTrace>* trace) const {
  const std::size_t H = hidden_dim();
  std::vector<Tensor> states;
  states.reserve(inputs.size());
  if (trace != nullptr) trace->assign(inputs.size(), {});
  Tensor h(Shape{H});
  for (std::size_t l = 0; l < inputs.size(); ++l) {
    const Tensor& x = inputs[l];
    Tensor r = ops::affine(x, W_er_, b_r_);
    ops::kernel::gemv_acc(W_hr_.value.data(), H, H, h.data(), r.data());
    r = ops::sigmoid(r);
    Tensor z = ops::affine(x, W_ez_, b_z_);
    ops::kernel::gemv_acc(W_hz_.value.data(), H, H, h.data(), z.data());
    z = ops::sigmoid(z);
    Tensor rh(Shape{H});
    for (std::size_t i = 0; i < H; ++i) rh[i] = r[i] * h[i];
    Tensor c = ops::affine(x, W_ec_, b_c_);
    ops::kernel::gemv_acc(W_hc_.value.data(), H, H, rh.data(), c.data());
    c = ops::tanh(c);
    Tensor next(Shape{H});
    for (std::size_t i = 0; i < H; ++i) next[i] = (1.0 - z[i]) * h[i] + z[i] * c[i];
    if (trace != nullptr) {
      (*trace)[l] = GruStepTrace{x, h, std::move(r), std::move(z), std::move(c), std::move(rh), next};
    }
    h = next;
    states.push_back(std::move(next));
  }
  return states;
}

std::vector<Tensor> GruLayer::backward(const std::vector<GruStepTrace>& trace, const std::vector<Tensor>& d_states) {
  if (d_states.size() != trace.size()) throw ContractError("GRU backward: gradient count does not match steps");
  const std::size_t H = hidden_dim();
  std::vector<Tensor> d_inputs(trace.size());
  Tensor carry(Shape{H});
  Tensor dz_pre(Shape{H}), dr_pre(Shape{H}), dc_pre(Shape{H});
  for (std::size_t step = trace.size(); step-- > 0;) {
    const GruStepTrace& s = trace[step];
    Tensor dh = carry;
    for (std::size_t i = 0; i < H; ++i) dh[i] += d_states[step][i];

    Tensor dh_prev(Shape{H});
    for (std::size_t i = 0; i < H; ++i) {
      const double dz = dh[i] * (s.c[i] - s.h_prev[i]);
      const double dc = dh[i] * s.z[i];
      dh_prev[i] = dh[i] * (1.0 - s.z[i]);
      dz_pre[i] = dz * s.z[i] * (1.0 - s.z[i]);
      dc_pre[i] = dc * (1.0 - s.c[i] * s.c[i]);
    }
    Tensor& dx = d_inputs[step];
    ops::affine_backward(s.x, W_ec_, b_c_, dc_pre, &dx);
    Tensor drh;
    ops::matvec_backward(s.rh, W_hc_, dc_pre, &drh);
    for (std::size_t i = 0; i < H; ++i) {
      dh_prev[i] += drh[i] * s.r[i];
      const double dr = drh[i] * s.h_prev[i];
      dr_pre[i] = dr * s.r[i] * (1.0 - s.r[i]);
    }
    ops::affine_backward(s.x, W_er_, b_r_, dr_pre, &dx);
    ops::matvec_backward(s.h_prev, W_hr_, dr_pre, &dh_prev);
    ops::affine_backward(s.x, W_ez_, b_z_, dz_pre, &dx);
    ops::matvec_backward(s.h_prev, W_hz_, dz_pre, &dh_prev);
    carry = std::move(dh_prev);
  }
  return d_inputs;
}

std::vector<Parameter*> GruLayer::parameters() {
  return {&W_er_, &W_hr_, &b_r_, &W_ez_, &W_hz_, &b_z_, &W_ec_, &W_hc_, &b_c_};
}

GruStack::GruStack(const std::string& prefix, std::size_t layers, std::size_t input_dim, std::size_t hidden_dim) {
  for (std::size_t k = 0; k < layers; ++k) {
    layers_.emplace_back(prefix + std::to_string(k + 1), k == 0 ? input_dim : hidden_dim, hidden_dim);
  }
}

std::vector<Tensor> GruStack::forward(const std::vector<Tensor>& inputs,
                                      std::vector<std::vector<GruStepTrace>>* trace) const {
  if (trace != nullptr) trace->assign(layers_.size(), {});
  std::vector<Tensor> states = inputs;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    states = layers_[k].forward(states, trace != nullptr ? &(*trace)[k] : nullptr);
  }
  return states;
}

std::vector<Tensor> GruStack::backward(const std::vector<std::vector<GruStepTrace>>& trace,
                                       const std::vector<Tensor>& d_top) {
  std::vector<Tensor> grads = d_top;
  for (std::size_t k = layers_.size(); k-- > 0;) grads = layers_[k].backward(trace[k], grads);
  return grads;
}

std::vector<Parameter*> GruStack::parameters() {
  std::vector<Parameter*> out;
  for (GruLayer& layer : layers_) {
    const auto p = layer.parameters();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

}  // namespace tact
