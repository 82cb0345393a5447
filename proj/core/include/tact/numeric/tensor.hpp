#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace tact {

/// Extents of a tensor. Rank is at most three, which covers every layer here.
class Shape {
 public:
  static constexpr std::size_t kMaxRank = 3;

  Shape() = default;
  Shape(std::initializer_list<std::size_t> extents);

  std::size_t rank() const { return rank_; }
  std::size_t operator[](std::size_t axis) const { return extents_[axis]; }
  std::size_t elements() const;

  bool operator==(const Shape& other) const;
  bool operator!=(const Shape& other) const { return !(*this == other); }

  std::string to_string() const;

 private:
  std::array<std::size_t, kMaxRank> extents_{};
  std::size_t rank_ = 0;
};

/// Dense fp64 tensor in row-major order.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape);
  Tensor(Shape shape, std::vector<double> values);

  /// Rank-1 tensor owning `values`.
  static Tensor vector(std::vector<double> values);
  static Tensor zeros(std::size_t n) { return Tensor(Shape{n}); }

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  std::size_t rows() const { return shape_[0]; }
  std::size_t cols() const { return shape_.rank() > 1 ? shape_[1] : 1; }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& at(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  void fill(double v);
  bool all_finite() const;

  bool operator==(const Tensor& other) const = default;

 private:
  Shape shape_;
  std::vector<double> values_;
};

/// A trainable tensor plus its gradient accumulator.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Shape shape);

  void zero_grad() { grad.fill(0.0); }

  std::string name;
  Tensor value;
  Tensor grad;
};

}  // namespace tact
