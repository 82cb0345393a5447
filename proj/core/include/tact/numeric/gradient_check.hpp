#pragma once

#include <functional>
#include <span>
#include <string>

#include "tact/numeric/tensor.hpp"

namespace tact {

struct GradientCheckResult {
  double max_relative_error = 0.0;  ///< worst parameter's error
  std::string worst_parameter;
  std::size_t worst_index = 0;      ///< largest absolute discrepancy within it
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t coordinates_checked = 0;
};

/// Compares analytic gradients against central differences.
///
/// `forward` evaluates the composed function and must return a single-element
/// tensor. `backward` must run the forward pass again and accumulate the
/// gradient of that scalar into every parameter's `grad`; gradients are
/// zeroed before it is called. The error of one parameter is
/// ‖analytic - cd‖ / max(‖analytic‖, ‖cd‖, floor) over all of its
/// coordinates, so a single near-zero coordinate cannot dominate.
GradientCheckResult gradient_check(std::span<Parameter* const> params,
                                   const std::function<Tensor()>& forward,
                                   const std::function<void()>& backward,
                                   double h = 1e-6,
                                   double floor = 1e-12);

}  // namespace tact
