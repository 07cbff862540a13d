#pragma once

#include <cstdint>

#include "graphct/geometry.hpp"
#include "graphct/phantom.hpp"
#include "graphct/tensor.hpp"

namespace graphct {

/// Line-integral measurements of one scan: data (n, P) indexed by
/// (source angle, detector pixel), tied to the geometry that produced it.
struct Sinogram {
    Tensor data;
    AcquisitionGeometry geometry;

    int view_count() const { return data.size(0); }
    int detector_pixel_count() const { return data.size(1); }

    /// Keep every factor-th view; pairs with the subsampled geometry.
    Sinogram subsample_views(int factor) const;
};

/// Ray transform of the phantom on the given geometry: per (angle, detector
/// pixel) the line integral of the grid, sampled twice per pixel width with
/// bilinear interpolation. Linear in the phantom grid.
///
/// Fan beam requires the source orbit to stay outside the grid's bounding
/// circle (orbit_radius > half diagonal).
Sinogram forward_project(const Phantom& phantom, const AcquisitionGeometry& geometry);

/// Poisson transmission noise: t = I0*exp(-y) is Poisson-sampled and
/// re-logged as y' = -ln(max(t, 1)/I0). Deterministic per seed.
Sinogram apply_noise(const Sinogram& sinogram, double photons_i0, std::uint64_t seed);

} // namespace graphct
