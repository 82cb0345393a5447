#include "tact/numeric/ops.hpp"

#include <algorithm>
#include <cmath>

#include "tact/error.hpp"

namespace tact::ops {

namespace kernel {

void gemv_acc(const double* W, std::size_t m, std::size_t n, const double* x, double* y) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = W + i * n;
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      s0 += row[j] * x[j];
      s1 += row[j + 1] * x[j + 1];
      s2 += row[j + 2] * x[j + 2];
      s3 += row[j + 3] * x[j + 3];
    }
    for (; j < n; ++j) s0 += row[j] * x[j];
    y[i] += (s0 + s1) + (s2 + s3);
  }
}

void gemv_t_acc(const double* W, std::size_t m, std::size_t n, const double* dy, double* dx) {
  for (std::size_t i = 0; i < m; ++i) {
    const double g = dy[i];
    if (g == 0.0) continue;
    const double* row = W + i * n;
    for (std::size_t j = 0; j < n; ++j) dx[j] += g * row[j];
  }
}

void ger_acc(double* dW, std::size_t m, std::size_t n, const double* dy, const double* x) {
  for (std::size_t i = 0; i < m; ++i) {
    const double g = dy[i];
    if (g == 0.0) continue;
    double* row = dW + i * n;
    for (std::size_t j = 0; j < n; ++j) row[j] += g * x[j];
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0;
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    s0 += a[j] * b[j];
    s1 += a[j + 1] * b[j + 1];
  }
  for (; j < n; ++j) s0 += a[j] * b[j];
  return s0 + s1;
}

}  // namespace kernel

namespace {

void require_matrix_vector(const Parameter& W, const Tensor& x, const char* op) {
  if (W.value.shape().rank() != 2 || x.shape().rank() != 1 || W.value.cols() != x.size()) {
    throw ConfigError(std::string(op) + ": weight " + W.value.shape().to_string() +
                      " does not conform to input " + x.shape().to_string());
  }
}

void prepare_upstream(Tensor* dx, const Tensor& like) {
  if (dx == nullptr) return;
  if (dx->empty()) {
    *dx = Tensor(like.shape());
  } else if (dx->shape() != like.shape()) {
    throw ConfigError("upstream gradient " + dx->shape().to_string() + " does not match input " +
                      like.shape().to_string());
  }
}

}  // namespace

Tensor affine(const Tensor& x, const Parameter& W, const Parameter& b) {
  require_matrix_vector(W, x, "affine");
  if (b.value.shape() != Shape{W.value.rows()}) {
    throw ConfigError("affine: bias " + b.value.shape().to_string() + " does not conform to weight " +
                      W.value.shape().to_string());
  }
  Tensor y = b.value;
  kernel::gemv_acc(W.value.data(), W.value.rows(), W.value.cols(), x.data(), y.data());
  return y;
}

void affine_backward(const Tensor& x, Parameter& W, Parameter& b, const Tensor& dy, Tensor* dx) {
  matvec_backward(x, W, dy, dx);
  for (std::size_t i = 0; i < dy.size(); ++i) b.grad[i] += dy[i];
}

Tensor matvec(const Parameter& W, const Tensor& x) {
  require_matrix_vector(W, x, "matvec");
  Tensor y(Shape{W.value.rows()});
  kernel::gemv_acc(W.value.data(), W.value.rows(), W.value.cols(), x.data(), y.data());
  return y;
}

void matvec_backward(const Tensor& x, Parameter& W, const Tensor& dy, Tensor* dx) {
  const std::size_t m = W.value.rows();
  const std::size_t n = W.value.cols();
  if (dy.size() != m || x.size() != n) {
    throw ConfigError("matvec_backward: gradient " + dy.shape().to_string() + " / input " +
                      x.shape().to_string() + " do not conform to weight " + W.value.shape().to_string());
  }
  kernel::ger_acc(W.grad.data(), m, n, dy.data(), x.data());
  if (dx != nullptr) {
    prepare_upstream(dx, x);
    kernel::gemv_t_acc(W.value.data(), m, n, dy.data(), dx->data());
  }
}

Tensor onehot_project(const Parameter& W, std::size_t index) {
  if (W.value.shape().rank() != 2 || index >= W.value.cols()) {
    throw ConfigError("onehot_project: index " + std::to_string(index) + " outside weight " +
                      W.value.shape().to_string());
  }
  const std::size_t m = W.value.rows();
  Tensor y(Shape{m});
  for (std::size_t i = 0; i < m; ++i) y[i] = W.value.at(i, index);
  return y;
}

void onehot_project_backward(Parameter& W, std::size_t index, const Tensor& dy) {
  for (std::size_t i = 0; i < dy.size(); ++i) W.grad.at(i, index) += dy[i];
}

std::string_view activation_name(Activation kind) {
  switch (kind) {
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Tanh: return "tanh";
    case Activation::Relu: return "relu";
    case Activation::Softmax: return "softmax";
  }
  return "unknown";
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

void softmax_rows(const Tensor& x, Tensor& y) {
  const std::size_t width = x.shape()[x.shape().rank() - 1];
  const std::size_t rows = x.size() / width;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* in = x.data() + r * width;
    double* out = y.data() + r * width;
    const double peak = *std::max_element(in, in + width);
    double total = 0.0;
    for (std::size_t j = 0; j < width; ++j) {
      out[j] = std::exp(in[j] - peak);
      total += out[j];
    }
    for (std::size_t j = 0; j < width; ++j) out[j] /= total;
  }
}

}  // namespace

Tensor activate(Activation kind, const Tensor& x) {
  Tensor y(x.shape());
  switch (kind) {
    case Activation::Sigmoid:
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = sigmoid(x[i]);
      break;
    case Activation::Tanh:
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::tanh(x[i]);
      break;
    case Activation::Relu:
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
      break;
    case Activation::Softmax:
      softmax_rows(x, y);
      break;
  }
  return y;
}

Tensor activate_backward(Activation kind, const Tensor& y, const Tensor& dy) {
  if (y.shape() != dy.shape()) {
    throw ConfigError("activation backward: output " + y.shape().to_string() + " vs gradient " +
                      dy.shape().to_string());
  }
  Tensor dx(y.shape());
  switch (kind) {
    case Activation::Sigmoid:
      for (std::size_t i = 0; i < y.size(); ++i) dx[i] = dy[i] * y[i] * (1.0 - y[i]);
      break;
    case Activation::Tanh:
      for (std::size_t i = 0; i < y.size(); ++i) dx[i] = dy[i] * (1.0 - y[i] * y[i]);
      break;
    case Activation::Relu:
      for (std::size_t i = 0; i < y.size(); ++i) dx[i] = y[i] > 0.0 ? dy[i] : 0.0;
      break;
    case Activation::Softmax: {
      const std::size_t width = y.shape()[y.shape().rank() - 1];
      const std::size_t rows = y.size() / width;
      for (std::size_t r = 0; r < rows; ++r) {
        const double* p = y.data() + r * width;
        const double* g = dy.data() + r * width;
        const double inner = kernel::dot(p, g, width);
        for (std::size_t j = 0; j < width; ++j) dx[r * width + j] = p[j] * (g[j] - inner);
      }
      break;
    }
  }
  return dx;
}

double l2_distance(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ConfigError("l2_distance: shapes " + a.shape().to_string() + " and " + b.shape().to_string() +
                      " differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return std::sqrt(total);
}

void l2_distance_backward(const Tensor& a, const Tensor& b, double dout, Tensor* da, Tensor* db) {
  const double dist = l2_distance(a, b);
  prepare_upstream(da, a);
  prepare_upstream(db, b);
  if (dist == 0.0) return;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double g = dout * (a[i] - b[i]) / dist;
    if (da != nullptr) (*da)[i] += g;
    if (db != nullptr) (*db)[i] -= g;
  }
}

}  // namespace tact::ops
