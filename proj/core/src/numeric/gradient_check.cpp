#include "tact/numeric/gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tact/error.hpp"

namespace tact {

namespace {

double scalar_of(const Tensor& out) {
  if (out.size() != 1) {
    throw ContractError("gradient_check needs a scalar-valued forward, got shape " +
                        out.shape().to_string());
  }
  return out[0];
}

}  // namespace

GradientCheckResult gradient_check(std::span<Parameter* const> params,
                                   const std::function<Tensor()>& forward,
                                   const std::function<void()>& backward,
                                   double h,
                                   double floor) {
  if (!(h >= 1e-7 && h <= 1e-4)) {
    throw ContractError("gradient_check step must lie in [1e-7, 1e-4]");
  }
  scalar_of(forward());

  for (Parameter* p : params) p->zero_grad();
  backward();
  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (const Parameter* p : params) analytic.push_back(p->grad);

  GradientCheckResult result;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    double diff_sq = 0.0, a_sq = 0.0, cd_sq = 0.0, worst = -1.0;
    std::size_t worst_index = 0;
    double worst_a = 0.0, worst_cd = 0.0;
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value[i];
      p.value[i] = saved + h;
      const double plus = scalar_of(forward());
      p.value[i] = saved - h;
      const double minus = scalar_of(forward());
      p.value[i] = saved;

      const double cd = (plus - minus) / (2.0 * h);
      const double a = analytic[k][i];
      diff_sq += (a - cd) * (a - cd);
      a_sq += a * a;
      cd_sq += cd * cd;
      if (std::abs(a - cd) > worst) {
        worst = std::abs(a - cd);
        worst_index = i;
        worst_a = a;
        worst_cd = cd;
      }
      ++result.coordinates_checked;
    }
    const double rel = std::sqrt(diff_sq) / std::max({std::sqrt(a_sq), std::sqrt(cd_sq), floor});
    if (rel > result.max_relative_error || result.worst_parameter.empty()) {
      result.max_relative_error = rel;
      result.worst_parameter = p.name;
      result.worst_index = worst_index;
      result.analytic = worst_a;
      result.numeric = worst_cd;
    }
  }
  for (Parameter* p : params) p->zero_grad();
  return result;
}

}  // namespace tact
