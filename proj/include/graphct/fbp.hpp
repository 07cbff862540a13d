#pragma once

#include <memory>

#include "graphct/geometry.hpp"
#include "graphct/project.hpp"
#include "graphct/tensor.hpp"

namespace graphct {

/// Reconstruction grid description.
struct ImageSpec {
    int height = 0;
    int width = 0;
    double pixel_size = 0.0;

    static ImageSpec square(int size) { return {size, size, 2.0 / static_cast<double>(size)}; }
};

/// Filtered backprojection as an explicit linear operator with an exact
/// transpose, so reconstruction can sit inside a differentiable pipeline.
///
/// Per view the detector row is ramp (Ram-Lak) filtered in the frequency
/// domain, zero-padded to the next power of two >= 2P, no apodization.
/// Parallel beam then backprojects with linear detector interpolation; fan
/// beam adds the standard flat-detector cosine pre-weighting and inverse
/// square distance weighting. Angles must be uniformly spaced; anything else
/// is rejected.
class FbpOperator {
public:
    FbpOperator(const AcquisitionGeometry& geometry, const ImageSpec& image);
    ~FbpOperator();

    FbpOperator(const FbpOperator&) = delete;
    FbpOperator& operator=(const FbpOperator&) = delete;

    /// sinogram (n, P) -> image (H, W)
    Tensor apply(const Tensor& sinogram) const;

    /// Exact transpose of apply: image (H, W) -> sinogram-shaped (n, P).
    Tensor apply_transpose(const Tensor& image) const;

    /// Ram-Lak filtering of every detector row; self-adjoint as a real
    /// linear map, exposed for tests.
    Tensor filter_rows(const Tensor& sinogram) const;

    const AcquisitionGeometry& geometry() const;
    const ImageSpec& image() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot reconstruction.
Tensor fbp_reconstruct(const Sinogram& sinogram, const ImageSpec& image);

} // namespace graphct
