#pragma once

#include "graphct/rng.hpp"
#include "graphct/tensor.hpp"

namespace graphct {

/// 1D convolution kernel acting along the detector axis.
/// weights: (c_out, c_in, S), bias: (c_out). S must be odd so that zero
/// padding of (S-1)/2 on each side preserves the signal length.
struct ConvKernel1D {
    Tensor weights;
    Tensor bias;

    ConvKernel1D() = default;
    ConvKernel1D(int c_out, int c_in, int s);

    int c_out() const { return weights.size(0); }
    int c_in() const { return weights.size(1); }
    int s() const { return weights.size(2); }

    /// Fan-in uniform init: entries in +-sqrt(1/(c_in*S)), bias zero.
    void init_fan_in(Rng& rng);
    void validate() const;
};

/// 2D convolution kernel, square S x S, zero padding on both axes.
struct ConvKernel2D {
    Tensor weights; // (c_out, c_in, S, S)
    Tensor bias;    // (c_out)

    ConvKernel2D() = default;
    ConvKernel2D(int c_out, int c_in, int s);

    int c_out() const { return weights.size(0); }
    int c_in() const { return weights.size(1); }
    int s() const { return weights.size(2); }

    void init_fan_in(Rng& rng); // +-sqrt(1/(c_in*S^2))
    void validate() const;
};

/// x: (c_in, L) -> (c_out, L), zero padding (S-1)/2 per side.
Tensor conv1d_forward(const Tensor& x, const ConvKernel1D& k);

/// Gradients of conv1d_forward. grad_out: (c_out, L). Accumulates into
/// grad_w/grad_b (shapes of weights/bias) and returns the input gradient.
Tensor conv1d_backward(const Tensor& x, const ConvKernel1D& k, const Tensor& grad_out,
                       Tensor& grad_w, Tensor& grad_b);

/// Batched form over the node axis: x (c_in, n, P) -> (c_out, n, P); the
/// convolution runs independently per node row.
Tensor conv1d_rows_forward(const Tensor& x, const ConvKernel1D& k);
Tensor conv1d_rows_backward(const Tensor& x, const ConvKernel1D& k, const Tensor& grad_out,
                            Tensor& grad_w, Tensor& grad_b);

/// x: (c_in, H, W) -> (c_out, H, W), zero padding (S-1)/2 on both axes.
Tensor conv2d_forward(const Tensor& x, const ConvKernel2D& k);
Tensor conv2d_backward(const Tensor& x, const ConvKernel2D& k, const Tensor& grad_out,
                       Tensor& grad_w, Tensor& grad_b);

} // namespace graphct
