#include "graphct/conv.hpp"

#include <cmath>
#include <stdexcept>

namespace graphct {

namespace {
void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}
} // namespace

ConvKernel1D::ConvKernel1D(int c_out, int c_in, int s)
    : weights({c_out, c_in, s}), bias({c_out}) {
    validate();
}

void ConvKernel1D::validate() const {
    require(weights.rank() == 3, "conv1d kernel weights must be (c_out, c_in, S)");
    require(bias.rank() == 1 && bias.size(0) == weights.size(0), "conv1d bias shape mismatch");
    require(s() % 2 == 1, "conv1d kernel size must be odd");
    require(weights.all_finite() && bias.all_finite(), "conv1d kernel entries must be finite");
}

void ConvKernel1D::init_fan_in(Rng& rng) {
    const double bound = std::sqrt(1.0 / (static_cast<double>(c_in()) * s()));
    for (auto& w : weights.storage()) w = rng.uniform(-bound, bound);
    bias.set_zero();
}

ConvKernel2D::ConvKernel2D(int c_out, int c_in, int s)
    : weights({c_out, c_in, s, s}), bias({c_out}) {
    validate();
}

void ConvKernel2D::validate() const {
    require(weights.rank() == 4, "conv2d kernel weights must be (c_out, c_in, S, S)");
    require(weights.size(2) == weights.size(3), "conv2d kernel must be square");
    require(bias.rank() == 1 && bias.size(0) == weights.size(0), "conv2d bias shape mismatch");
    require(s() % 2 == 1, "conv2d kernel size must be odd");
    require(weights.all_finite() && bias.all_finite(), "conv2d kernel entries must be finite");
}

void ConvKernel2D::init_fan_in(Rng& rng) {
    const double bound = std::sqrt(1.0 / (static_cast<double>(c_in()) * s() * s()));
    for (auto& w : weights.storage()) w = rng.uniform(-bound, bound);
    bias.set_zero();
}

Tensor conv1d_forward(const Tensor& x, const ConvKernel1D& k) {
    require(x.rank() == 2, "conv1d: input must be (c_in, L)");
    require(x.size(0) == k.c_in(), "conv1d: channel mismatch");
    const int ci = k.c_in(), co = k.c_out(), s = k.s(), l = x.size(1);
    const int pad = (s - 1) / 2;
    Tensor y({co, l});
    for (int o = 0; o < co; ++o) {
        const double b = k.bias(o);
        for (int p = 0; p < l; ++p) {
            double acc = b;
            for (int i = 0; i < ci; ++i) {
                const double* xr = x.data() + static_cast<std::size_t>(i) * l;
                const double* wr = k.weights.data() + (static_cast<std::size_t>(o) * ci + i) * s;
                const int t0 = std::max(0, pad - p);
                const int t1 = std::min(s, l + pad - p);
                for (int t = t0; t < t1; ++t) acc += wr[t] * xr[p + t - pad];
            }
            y(o, p) = acc;
        }
    }
    return y;
}

Tensor conv1d_backward(const Tensor& x, const ConvKernel1D& k, const Tensor& grad_out,
                       Tensor& grad_w, Tensor& grad_b) {
    require(grad_out.rank() == 2 && grad_out.size(0) == k.c_out() && grad_out.size(1) == x.size(1),
            "conv1d backward: grad shape mismatch");
    require(grad_w.same_shape(k.weights) && grad_b.same_shape(k.bias),
            "conv1d backward: gradient buffers mismatch");
    const int ci = k.c_in(), co = k.c_out(), s = k.s(), l = x.size(1);
    const int pad = (s - 1) / 2;
    Tensor gx({ci, l});
    for (int o = 0; o < co; ++o) {
        const double* gr = grad_out.data() + static_cast<std::size_t>(o) * l;
        double gb = 0.0;
        for (int p = 0; p < l; ++p) gb += gr[p];
        grad_b(o) += gb;
        for (int i = 0; i < ci; ++i) {
            const double* xr = x.data() + static_cast<std::size_t>(i) * l;
            const double* wr = k.weights.data() + (static_cast<std::size_t>(o) * ci + i) * s;
            double* gwr = grad_w.data() + (static_cast<std::size_t>(o) * ci + i) * s;
            double* gxr = gx.data() + static_cast<std::size_t>(i) * l;
            for (int p = 0; p < l; ++p) {
                const double g = gr[p];
                const int t0 = std::max(0, pad - p);
                const int t1 = std::min(s, l + pad - p);
                for (int t = t0; t < t1; ++t) {
                    gwr[t] += g * xr[p + t - pad];
                    gxr[p + t - pad] += g * wr[t];
                }
            }
        }
    }
    return gx;
}

Tensor conv1d_rows_forward(const Tensor& x, const ConvKernel1D& k) {
    require(x.rank() == 3, "conv1d rows: input must be (c_in, n, P)");
    require(x.size(0) == k.c_in(), "conv1d rows: channel mismatch");
    const int ci = k.c_in(), co = k.c_out(), s = k.s();
    const int n = x.size(1), p_len = x.size(2);
    const int pad = (s - 1) / 2;
    Tensor y({co, n, p_len});
    for (int o = 0; o < co; ++o) {
        const double b = k.bias(o);
        for (int node = 0; node < n; ++node) {
            double* yr = y.data() + (static_cast<std::size_t>(o) * n + node) * p_len;
            for (int p = 0; p < p_len; ++p) yr[p] = b;
            for (int i = 0; i < ci; ++i) {
                const double* xr = x.data() + (static_cast<std::size_t>(i) * n + node) * p_len;
                const double* wr = k.weights.data() + (static_cast<std::size_t>(o) * ci + i) * s;
                for (int p = 0; p < p_len; ++p) {
                    double acc = 0.0;
                    const int t0 = std::max(0, pad - p);
                    const int t1 = std::min(s, p_len + pad - p);
                    for (int t = t0; t < t1; ++t) acc += wr[t] * xr[p + t - pad];
                    yr[p] += acc;
                }
            }
        }
    }
    return y;
}

Tensor conv1d_rows_backward(const Tensor& x, const ConvKernel1D& k, const Tensor& grad_out,
                            Tensor& grad_w, Tensor& grad_b) {
    require(grad_out.rank() == 3 && grad_out.size(0) == k.c_out() &&
                grad_out.size(1) == x.size(1) && grad_out.size(2) == x.size(2),
            "conv1d rows backward: grad shape mismatch");
    const int ci = k.c_in(), co = k.c_out(), s = k.s();
    const int n = x.size(1), p_len = x.size(2);
    const int pad = (s - 1) / 2;
    Tensor gx({ci, n, p_len});
    for (int o = 0; o < co; ++o) {
        double gb = 0.0;
        for (int node = 0; node < n; ++node) {
            const double* gr = grad_out.data() + (static_cast<std::size_t>(o) * n + node) * p_len;
            for (int p = 0; p < p_len; ++p) gb += gr[p];
            for (int i = 0; i < ci; ++i) {
                const double* xr = x.data() + (static_cast<std::size_t>(i) * n + node) * p_len;
                const double* wr = k.weights.data() + (static_cast<std::size_t>(o) * ci + i) * s;
                double* gwr = grad_w.data() + (static_cast<std::size_t>(o) * ci + i) * s;
                double* gxr = gx.data() + (static_cast<std::size_t>(i) * n + node) * p_len;
                for (int p = 0; p < p_len; ++p) {
                    const double g = gr[p];
                    const int t0 = std::max(0, pad - p);
                    const int t1 = std::min(s, p_len + pad - p);
                    for (int t = t0; t < t1; ++t) {
                        gwr[t] += g * xr[p + t - pad];
                        gxr[p + t - pad] += g * wr[t];
                    }
                }
            }
        }
        grad_b(o) += gb;
    }
    return gx;
}

Tensor conv2d_forward(const Tensor& x, const ConvKernel2D& k) {
    require(x.rank() == 3, "conv2d: input must be (c_in, H, W)");
    require(x.size(0) == k.c_in(), "conv2d: channel mismatch");
    const int ci = k.c_in(), co = k.c_out(), s = k.s();
    const int h = x.size(1), w = x.size(2);
    const int pad = (s - 1) / 2;
    Tensor y({co, h, w});
    for (int o = 0; o < co; ++o) {
        const double b = k.bias(o);
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                double acc = b;
                const int u0 = std::max(0, pad - r), u1 = std::min(s, h + pad - r);
                const int v0 = std::max(0, pad - c), v1 = std::min(s, w + pad - c);
                for (int i = 0; i < ci; ++i) {
                    const double* xp = x.data() + static_cast<std::size_t>(i) * h * w;
                    const double* wp =
                        k.weights.data() + ((static_cast<std::size_t>(o) * ci + i) * s) * s;
                    for (int u = u0; u < u1; ++u) {
                        const double* xrow = xp + static_cast<std::size_t>(r + u - pad) * w;
                        const double* wrow = wp + static_cast<std::size_t>(u) * s;
                        for (int v = v0; v < v1; ++v) acc += wrow[v] * xrow[c + v - pad];
                    }
                }
                y(o, r, c) = acc;
            }
        }
    }
    return y;
}

Tensor conv2d_backward(const Tensor& x, const ConvKernel2D& k, const Tensor& grad_out,
                       Tensor& grad_w, Tensor& grad_b) {
    require(grad_out.rank() == 3 && grad_out.size(0) == k.c_out() &&
                grad_out.size(1) == x.size(1) && grad_out.size(2) == x.size(2),
            "conv2d backward: grad shape mismatch");
    const int ci = k.c_in(), co = k.c_out(), s = k.s();
    const int h = x.size(1), w = x.size(2);
    const int pad = (s - 1) / 2;
    Tensor gx({ci, h, w});
    for (int o = 0; o < co; ++o) {
        const double* gp = grad_out.data() + static_cast<std::size_t>(o) * h * w;
        double gb = 0.0;
        for (std::size_t t = 0; t < static_cast<std::size_t>(h) * w; ++t) gb += gp[t];
        grad_b(o) += gb;
        for (int r = 0; r < h; ++r) {
            const double* grow = gp + static_cast<std::size_t>(r) * w;
            const int u0 = std::max(0, pad - r), u1 = std::min(s, h + pad - r);
            for (int c = 0; c < w; ++c) {
                const double g = grow[c];
                const int v0 = std::max(0, pad - c), v1 = std::min(s, w + pad - c);
                for (int i = 0; i < ci; ++i) {
                    const double* xp = x.data() + static_cast<std::size_t>(i) * h * w;
                    double* gxp = gx.data() + static_cast<std::size_t>(i) * h * w;
                    const std::size_t wbase = (static_cast<std::size_t>(o) * ci + i) *
                                              static_cast<std::size_t>(s) * s;
                    const double* wp = k.weights.data() + wbase;
                    double* gwp = grad_w.data() + wbase;
                    for (int u = u0; u < u1; ++u) {
                        const std::size_t xoff = static_cast<std::size_t>(r + u - pad) * w;
                        const std::size_t woff = static_cast<std::size_t>(u) * s;
                        for (int v = v0; v < v1; ++v) {
                            gwp[woff + v] += g * xp[xoff + c + v - pad];
                            gxp[xoff + c + v - pad] += g * wp[woff + v];
                        }
                    }
                }
            }
        }
    }
    return gx;
}

} // namespace graphct
