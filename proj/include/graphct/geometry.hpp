#pragma once

#include <cstdint>
#include <vector>

namespace graphct {

enum class BeamKind { parallel, fan };

/// Sampled circular acquisition geometry: source angles on the unit circle
/// plus a flat line-detector description. This is the discretized line
/// manifold every sinogram in the project refers to.
///
/// Invariants enforced at construction:
///  - angles strictly increasing, all in [0, 2*pi)
///  - detector_pixel_count >= 1, detector_pixel_spacing > 0
///  - parallel beam has an infinite orbit radius, fan beam a finite positive one
///  - full_rotation implies angle[i] = angle[0] + i*(2*pi/n) within 1e-12
class AcquisitionGeometry {
public:
    /// Uniform sampling of the full circle: angles i*2*pi/n_views, i = 0..n_views-1.
    /// Rejects n_views < 3 (the neighbour graph would be degenerate) and
    /// non-positive radius/spacing.
    static AcquisitionGeometry uniform(int n_views, int detector_pixels, BeamKind kind,
                                       double orbit_radius, double spacing);

    /// Geometry from an explicit angle list. full_rotation is detected from
    /// the angles themselves.
    static AcquisitionGeometry from_angles(std::vector<double> angles, int detector_pixels,
                                           BeamKind kind, double orbit_radius, double spacing);

    /// Keep every factor-th angle starting at index 0. When factor divides
    /// the view count the result is again a uniform full rotation; otherwise
    /// floor(n/factor) views are kept and the geometry is flagged as not
    /// closing the circle (the wrap gap differs from the interior gaps).
    AcquisitionGeometry subsample(int factor) const;

    const std::vector<double>& source_angles() const { return angles_; }
    int view_count() const { return static_cast<int>(angles_.size()); }
    int detector_pixel_count() const { return detector_pixels_; }
    double detector_pixel_spacing() const { return spacing_; }
    double orbit_radius() const { return orbit_radius_; }
    BeamKind beam_kind() const { return beam_; }
    bool full_rotation() const { return full_rotation_; }

    /// Detector coordinate of pixel k, centered: (k - (P-1)/2) * spacing.
    double detector_coordinate(int k) const;

    /// Stable content hash used to stamp sinogram files.
    std::uint64_t hash() const;

    bool operator==(const AcquisitionGeometry& other) const;

private:
    AcquisitionGeometry(std::vector<double> angles, int detector_pixels, BeamKind kind,
                        double orbit_radius, double spacing, bool full_rotation);
    void validate() const;

    std::vector<double> angles_;
    int detector_pixels_ = 0;
    BeamKind beam_ = BeamKind::parallel;
    double orbit_radius_ = 0.0;
    double spacing_ = 0.0;
    bool full_rotation_ = false;
};

/// Free-function spelling of the geometry constructors.
AcquisitionGeometry build_geometry(int n_views, int detector_pixels, BeamKind kind,
                                   double orbit_radius, double spacing);
AcquisitionGeometry subsample_geometry(const AcquisitionGeometry& g, int factor);

} // namespace graphct
