#pragma once

#include <vector>

#include "graphct/tensor.hpp"

namespace graphct {

/// 10*log10(peak^2 / MSE). Identical images give +infinity (flagged by the
/// caller via std::isinf).
double psnr(const Tensor& a, const Tensor& b, double peak);

/// Min-max normalization to [0, 255] with rounding to integers; a constant
/// image maps to all zeros.
Tensor quantize_u8(const Tensor& image);

/// Mean local SSIM over valid window positions, 11x11 Gaussian window
/// sigma = 1.5, K1 = 0.01, K2 = 0.03, L = 255. Inputs must already be 8-bit
/// quantized (values in [0, 255]); images smaller than the window are
/// rejected.
double ssim_u8(const Tensor& a, const Tensor& b);

/// Convenience: quantize both images, then ssim_u8.
double ssim(const Tensor& a, const Tensor& b);

/// 256-bin histogram of an 8-bit image, counts divided by the largest count.
std::vector<double> grayscale_histogram(const Tensor& u8_image);

/// Bin indices of local maxima at or above `threshold` (plateaus collapse to
/// their first bin).
std::vector<int> histogram_peaks(const std::vector<double>& bins, double threshold);

} // namespace graphct
