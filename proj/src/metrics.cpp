#include "graphct/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace graphct {

double psnr(const Tensor& a, const Tensor& b, double peak) {
    if (!a.same_shape(b)) throw std::invalid_argument("psnr: shape mismatch");
    if (!(peak > 0.0)) throw std::invalid_argument("psnr: peak must be positive");
    double mse = 0.0;
    for (std::size_t i = 0; i < a.numel(); ++i) {
        const double d = a[i] - b[i];
        mse += d * d;
    }
    mse /= static_cast<double>(a.numel());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

Tensor quantize_u8(const Tensor& image) {
    Tensor out = image;
    const double lo = image.min_value();
    const double hi = image.max_value();
    if (!(hi > lo)) {
        out.set_zero();
        return out;
    }
    const double scale = 255.0 / (hi - lo);
    for (auto& v : out.storage()) v = std::round((v - lo) * scale);
    return out;
}

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kL = 255.0;
constexpr double kC1 = (0.01 * kL) * (0.01 * kL);
constexpr double kC2 = (0.03 * kL) * (0.03 * kL);

const std::vector<double>& gaussian_window() {
    static const std::vector<double> window = [] {
        std::vector<double> w(kWindow * kWindow);
        const int half = kWindow / 2;
        double sum = 0.0;
        for (int r = 0; r < kWindow; ++r) {
            for (int c = 0; c < kWindow; ++c) {
                const double dr = r - half, dc = c - half;
                const double v = std::exp(-(dr * dr + dc * dc) / (2.0 * kSigma * kSigma));
                w[static_cast<std::size_t>(r) * kWindow + c] = v;
                sum += v;
            }
        }
        for (auto& v : w) v /= sum;
        return w;
    }();
    return window;
}

} // namespace

double ssim_u8(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("ssim: shape mismatch");
    if (a.rank() != 2) throw std::invalid_argument("ssim: images must be (H, W)");
    const int h = a.size(0), w = a.size(1);
    if (h < kWindow || w < kWindow)
        throw std::invalid_argument("ssim: image smaller than the 11x11 window");

    const auto& win = gaussian_window();
    double total = 0.0;
    long long count = 0;
    for (int r = 0; r + kWindow <= h; ++r) {
        for (int c = 0; c + kWindow <= w; ++c) {
            double mu_a = 0.0, mu_b = 0.0, aa = 0.0, bb = 0.0, ab = 0.0;
            for (int u = 0; u < kWindow; ++u) {
                for (int v = 0; v < kWindow; ++v) {
                    const double wv = win[static_cast<std::size_t>(u) * kWindow + v];
                    const double pa = a(r + u, c + v);
                    const double pb = b(r + u, c + v);
                    mu_a += wv * pa;
                    mu_b += wv * pb;
                    aa += wv * pa * pa;
                    bb += wv * pb * pb;
                    ab += wv * pa * pb;
                }
            }
            const double var_a = aa - mu_a * mu_a;
            const double var_b = bb - mu_b * mu_b;
            const double cov = ab - mu_a * mu_b;
            const double num = (2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2);
            const double den = (mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2);
            total += num / den;
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

double ssim(const Tensor& a, const Tensor& b) { return ssim_u8(quantize_u8(a), quantize_u8(b)); }

std::vector<double> grayscale_histogram(const Tensor& u8_image) {
    std::vector<double> bins(256, 0.0);
    for (std::size_t i = 0; i < u8_image.numel(); ++i) {
        int v = static_cast<int>(u8_image[i]);
        if (v < 0) v = 0;
        if (v > 255) v = 255;
        bins[static_cast<std::size_t>(v)] += 1.0;
    }
    double peak = 0.0;
    for (double v : bins) peak = std::max(peak, v);
    if (peak > 0.0)
        for (auto& v : bins) v /= peak;
    return bins;
}

std::vector<int> histogram_peaks(const std::vector<double>& bins, double threshold) {
    std::vector<int> peaks;
    const int n = static_cast<int>(bins.size());
    for (int i = 0; i < n; ++i) {
        const double v = bins[static_cast<std::size_t>(i)];
        if (v < threshold) continue;
        const double left = i > 0 ? bins[static_cast<std::size_t>(i) - 1] : -1.0;
        const double right = i + 1 < n ? bins[static_cast<std::size_t>(i) + 1] : -1.0;
        if (v > left && v >= right) peaks.push_back(i);
    }
    return peaks;
}

} // namespace graphct
