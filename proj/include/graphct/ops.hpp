#pragma once

#include <stdexcept>

#include "graphct/tensor.hpp"

namespace graphct {

/// Elementwise max(0, x).
inline Tensor relu(const Tensor& x) {
    Tensor y = x;
    for (auto& v : y.storage())
        if (v < 0.0) v = 0.0;
    return y;
}

/// Gradient of relu given the pre-activation values. The kink at exactly 0
/// takes the left derivative (0).
inline Tensor relu_backward(const Tensor& pre, const Tensor& grad_out) {
    if (!pre.same_shape(grad_out)) throw std::invalid_argument("relu_backward: shape mismatch");
    Tensor gx = grad_out;
    for (std::size_t i = 0; i < pre.numel(); ++i) {
        if (pre[i] <= 0.0) gx[i] = 0.0;
    }
    return gx;
}

/// Mean of squared differences.
inline double mse_loss(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("mse_loss: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.numel(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.numel());
}

/// d mse(a, b) / d a = 2 (a - b) / numel.
inline Tensor mse_backward(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("mse_backward: shape mismatch");
    Tensor g = a;
    const double scale = 2.0 / static_cast<double>(a.numel());
    for (std::size_t i = 0; i < a.numel(); ++i) g[i] = scale * (a[i] - b[i]);
    return g;
}

} // namespace graphct
