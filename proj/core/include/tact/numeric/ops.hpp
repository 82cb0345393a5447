#pragma once

// Forward and reverse-mode rules for the handful of operations the network
// needs. Backward functions *accumulate* into parameter gradients and into
// the optional upstream gradient `dx`; an empty `dx` is zero-initialised.

#include <cstddef>
#include <string_view>

#include "tact/numeric/tensor.hpp"

namespace tact::ops {

/// W·x + b for W of shape [m x n], x of length n, b of length m.
Tensor affine(const Tensor& x, const Parameter& W, const Parameter& b);
void affine_backward(const Tensor& x, Parameter& W, Parameter& b, const Tensor& dy, Tensor* dx);

/// W·x without a bias term.
Tensor matvec(const Parameter& W, const Tensor& x);
void matvec_backward(const Tensor& x, Parameter& W, const Tensor& dy, Tensor* dx);

/// W·onehot(index), i.e. column `index` of W.
Tensor onehot_project(const Parameter& W, std::size_t index);
void onehot_project_backward(Parameter& W, std::size_t index, const Tensor& dy);

enum class Activation { Sigmoid, Tanh, Relu, Softmax };

std::string_view activation_name(Activation kind);

/// Elementwise activation, or softmax over the last axis.
Tensor activate(Activation kind, const Tensor& x);

/// Gradient w.r.t. the activation input, expressed through its output `y`.
Tensor activate_backward(Activation kind, const Tensor& y, const Tensor& dy);

inline Tensor sigmoid(const Tensor& x) { return activate(Activation::Sigmoid, x); }
inline Tensor tanh(const Tensor& x) { return activate(Activation::Tanh, x); }
inline Tensor relu(const Tensor& x) { return activate(Activation::Relu, x); }
inline Tensor softmax(const Tensor& x) { return activate(Activation::Softmax, x); }

double sigmoid(double x);

/// Euclidean distance ||a - b||. At a == b the subgradient 0 is used.
double l2_distance(const Tensor& a, const Tensor& b);
void l2_distance_backward(const Tensor& a, const Tensor& b, double dout, Tensor* da, Tensor* db);

/// Raw kernels over contiguous row-major storage.
namespace kernel {
/// y += W x
void gemv_acc(const double* W, std::size_t m, std::size_t n, const double* x, double* y);
/// dx += W^T dy
void gemv_t_acc(const double* W, std::size_t m, std::size_t n, const double* dy, double* dx);
/// dW += dy x^T
void ger_acc(double* dW, std::size_t m, std::size_t n, const double* dy, const double* x);
double dot(const double* a, const double* b, std::size_t n);
}  // namespace kernel

}  // namespace tact::ops
