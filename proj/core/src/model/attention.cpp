#include "tact/model/attention.hpp"

#include <algorithm>
#include <cmath>

#include "tact/error.hpp"
#include "tact/numeric/ops.hpp"

namespace tact {

Tensor relative_time_encoding(std::int64_t t0, std::int64_t tl, std::size_t d) {
  if (d == 0 || d % 2 != 0) throw ConfigError("relative time encoding needs an even positive width");
  if (tl > t0) {
    throw ValidationError("history time " + std::to_string(tl) + " is after exposure time " + std::to_string(t0));
  }
  const double delta = static_cast<double>(t0 - tl);
  Tensor e(Shape{d});
  for (std::size_t j = 0; j < d / 2; ++j) {
    const double angle = delta / std::pow(10000.0, 2.0 * static_cast<double>(j) / static_cast<double>(d));
    e[2 * j] = std::sin(angle);
    e[2 * j + 1] = std::cos(angle);
  }
  return e;
}

Attention::Attention(const std::string& prefix, std::size_t hidden_dim, std::size_t item_dim,
                     std::size_t attention_dim, bool time_aware)
    : time_aware_(time_aware),
      W_h_(prefix + ".W_h", {attention_dim, hidden_dim}),
      W_i_(prefix + ".W_i", {attention_dim, item_dim}),
      v_(prefix + ".v", {1, attention_dim}) {
  if (time_aware_) W_t_ = Parameter(prefix + ".W_t", {attention_dim, item_dim});
}

Tensor Attention::forward(const std::vector<Tensor>& states, const Tensor& target, const std::vector<Tensor>& times,
                          const std::vector<bool>& mask, AttentionTrace* trace) const {
  const std::size_t L = states.size();
  if (mask.size() != L || (time_aware_ && times.size() != L)) {
    throw ConfigError("attention: states, times and mask must have one entry per position");
  }
  if (std::all_of(mask.begin(), mask.end(), [](bool m) { return m; })) {
    throw ValidationError("attention: every history position is masked");
  }
  const std::size_t V = v_.value.size();
  const Tensor shared = ops::matvec(W_i_, target);

  std::vector<Tensor> acts(L);
  std::vector<double> u(L, 0.0);
  double top = -INFINITY;
  for (std::size_t l = 0; l < L; ++l) {
    if (mask[l]) continue;
    Tensor pre = shared;
    ops::kernel::gemv_acc(W_h_.value.data(), V, W_h_.value.cols(), states[l].data(), pre.data());
    if (time_aware_) ops::kernel::gemv_acc(W_t_.value.data(), V, W_t_.value.cols(), times[l].data(), pre.data());
    acts[l] = ops::tanh(pre);
    u[l] = ops::kernel::dot(v_.value.data(), acts[l].data(), V);
    top = std::max(top, u[l]);
  }
  std::vector<double> a(L, 0.0);
  double total = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    if (mask[l]) continue;
    a[l] = std::exp(u[l] - top);
    total += a[l];
  }
  Tensor out(Shape{states.front().size()});
  for (std::size_t l = 0; l < L; ++l) {
    if (mask[l]) continue;
    a[l] /= total;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += a[l] * states[l][i];
  }
  if (trace != nullptr) {
    trace->activations = std::move(acts);
    trace->weights = std::move(a);
    trace->mask = mask;
  }
  return out;
}

void Attention::backward(const std::vector<Tensor>& states, const Tensor& target, const std::vector<Tensor>& times,
                         const AttentionTrace& trace, const Tensor& d_out, std::vector<Tensor>& d_states,
                         Tensor& d_target) {
  const std::size_t L = states.size();
  const std::size_t V = v_.value.size();
  const auto& a = trace.weights;

  std::vector<double> da(L, 0.0);
  double mean = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    if (trace.mask[l]) continue;
    da[l] = ops::kernel::dot(d_out.data(), states[l].data(), d_out.size());
    mean += a[l] * da[l];
    if (d_states[l].empty()) d_states[l] = Tensor(states[l].shape());
    for (std::size_t i = 0; i < d_out.size(); ++i) d_states[l][i] += a[l] * d_out[i];
  }

  Tensor d_shared(Shape{V});
  Tensor dpre(Shape{V});
  for (std::size_t l = 0; l < L; ++l) {
    if (trace.mask[l]) continue;
    const double du = a[l] * (da[l] - mean);
    if (du == 0.0) continue;
    const Tensor& act = trace.activations[l];
    for (std::size_t k = 0; k < V; ++k) {
      v_.grad[k] += du * act[k];
      dpre[k] = du * v_.value[k] * (1.0 - act[k] * act[k]);
      d_shared[k] += dpre[k];
    }
    ops::matvec_backward(states[l], W_h_, dpre, &d_states[l]);
    if (time_aware_) ops::kernel::ger_acc(W_t_.grad.data(), V, W_t_.value.cols(), dpre.data(), times[l].data());
  }
  ops::matvec_backward(target, W_i_, d_shared, &d_target);
}

std::vector<Parameter*> Attention::parameters() {
  std::vector<Parameter*> out = {&W_h_, &W_i_};
  if (time_aware_) out.push_back(&W_t_);
  out.push_back(&v_);
  return out;
}

}  // namespace tact
