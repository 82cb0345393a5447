#include "tact/numeric/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "tact/error.hpp"

namespace tact {

Shape::Shape(std::initializer_list<std::size_t> extents) {
  if (extents.size() == 0 || extents.size() > kMaxRank) {
    throw ConfigError("tensor rank must be in [1, 3], got " + std::to_string(extents.size()));
  }
  for (std::size_t e : extents) {
    if (e == 0) throw ConfigError("tensor extents must be positive");
    extents_[rank_++] = e;
  }
}

std::size_t Shape::elements() const {
  if (rank_ == 0) return 0;
  std::size_t n = 1;
  for (std::size_t i = 0; i < rank_; ++i) n *= extents_[i];
  return n;
}

bool Shape::operator==(const Shape& other) const {
  if (rank_ != other.rank_) return false;
  return std::equal(extents_.begin(), extents_.begin() + rank_, other.extents_.begin());
}

std::string Shape::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < rank_; ++i) {
    if (i) s += "x";
    s += std::to_string(extents_[i]);
  }
  return s + "]";
}

Tensor::Tensor(Shape shape) : shape_(shape), values_(shape.elements(), 0.0) {}

Tensor::Tensor(Shape shape, std::vector<double> values) : shape_(shape), values_(std::move(values)) {
  if (values_.size() != shape_.elements()) {
    throw ConfigError("tensor of shape " + shape_.to_string() + " needs " +
                      std::to_string(shape_.elements()) + " values, got " +
                      std::to_string(values_.size()));
  }
}

Tensor Tensor::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor(Shape{n}, std::move(values));
}

void Tensor::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

bool Tensor::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Parameter::Parameter(std::string name_, Shape shape) : name(std::move(name_)), value(shape), grad(shape) {}

}  // namespace tact
