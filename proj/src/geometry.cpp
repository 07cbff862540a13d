#include "graphct/geometry.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace graphct {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kUniformTol = 1e-12;

bool detect_full_rotation(const std::vector<double>& angles) {
    const std::size_t n = angles.size();
    if (n < 3) return false;
    const double step = kTwoPi / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(angles[i] - (angles[0] + static_cast<double>(i) * step)) > kUniformTol)
            return false;
    }
    return true;
}
} // namespace

AcquisitionGeometry::AcquisitionGeometry(std::vector<double> angles, int detector_pixels,
                                         BeamKind kind, double orbit_radius, double spacing,
                                         bool full_rotation)
    : angles_(std::move(angles)),
      detector_pixels_(detector_pixels),
      beam_(kind),
      orbit_radius_(orbit_radius),
      spacing_(spacing),
      full_rotation_(full_rotation) {
    validate();
}

void AcquisitionGeometry::validate() const {
    if (angles_.empty()) throw std::invalid_argument("geometry: no source angles");
    for (std::size_t i = 0; i < angles_.size(); ++i) {
        const double a = angles_[i];
        if (!(a >= 0.0 && a < kTwoPi))
            throw std::invalid_argument("geometry: angles must lie in [0, 2*pi)");
        if (i > 0 && !(a > angles_[i - 1]))
            throw std::invalid_argument("geometry: angles must be strictly increasing");
    }
    if (detector_pixels_ < 1) throw std::invalid_argument("geometry: detector_pixels must be >= 1");
    if (!(spacing_ > 0.0)) throw std::invalid_argument("geometry: detector spacing must be > 0");
    if (beam_ == BeamKind::parallel) {
        if (!std::isinf(orbit_radius_))
            throw std::invalid_argument("geometry: parallel beam uses an infinite orbit radius");
    } else {
        if (!(orbit_radius_ > 0.0) || std::isinf(orbit_radius_))
            throw std::invalid_argument("geometry: fan beam needs a finite positive orbit radius");
    }
    if (full_rotation_ && !detect_full_rotation(angles_))
        throw std::invalid_argument("geometry: full_rotation flag does not match angles");
}

AcquisitionGeometry AcquisitionGeometry::uniform(int n_views, int detector_pixels, BeamKind kind,
                                                 double orbit_radius, double spacing) {
    if (n_views < 3)
        throw std::invalid_argument("build_geometry: n_views must be >= 3, got " +
                                    std::to_string(n_views));
    std::vector<double> angles(static_cast<std::size_t>(n_views));
    const double step = kTwoPi / static_cast<double>(n_views);
    for (int i = 0; i < n_views; ++i) angles[static_cast<std::size_t>(i)] = static_cast<double>(i) * step;
    return AcquisitionGeometry(std::move(angles), detector_pixels, kind, orbit_radius, spacing,
                               /*full_rotation=*/true);
}

AcquisitionGeometry AcquisitionGeometry::from_angles(std::vector<double> angles,
                                                     int detector_pixels, BeamKind kind,
                                                     double orbit_radius, double spacing) {
    const bool full = detect_full_rotation(angles);
    return AcquisitionGeometry(std::move(angles), detector_pixels, kind, orbit_radius, spacing,
                               full);
}

AcquisitionGeometry AcquisitionGeometry::subsample(int factor) const {
    if (factor < 1) throw std::invalid_argument("subsample_geometry: factor must be >= 1");
    const int n = view_count();
    const int kept = n / factor;
    if (kept < 3)
        throw std::invalid_argument("subsample_geometry: fewer than 3 views would remain");
    std::vector<double> angles(static_cast<std::size_t>(kept));
    for (int i = 0; i < kept; ++i)
        angles[static_cast<std::size_t>(i)] = angles_[static_cast<std::size_t>(i) *
                                                      static_cast<std::size_t>(factor)];
    // When factor divides n a uniform full rotation stays one; otherwise the
    // wrap gap differs from the interior gap and the circle does not close.
    const bool full = full_rotation_ && (n % factor == 0);
    return AcquisitionGeometry(std::move(angles), detector_pixels_, beam_, orbit_radius_, spacing_,
                               full);
}

double AcquisitionGeometry::detector_coordinate(int k) const {
    return (static_cast<double>(k) - 0.5 * static_cast<double>(detector_pixels_ - 1)) * spacing_;
}

std::uint64_t AcquisitionGeometry::hash() const {
    // FNV-1a over the canonical byte serialization of all fields.
    std::uint64_t h = 14695981039346656037ULL;
    auto feed = [&h](const void* p, std::size_t len) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 1099511628211ULL;
        }
    };
    const std::uint32_t beam_tag = beam_ == BeamKind::parallel ? 0u : 1u;
    const std::uint32_t full_tag = full_rotation_ ? 1u : 0u;
    feed(&beam_tag, sizeof beam_tag);
    feed(&full_tag, sizeof full_tag);
    feed(&detector_pixels_, sizeof detector_pixels_);
    feed(&spacing_, sizeof spacing_);
    feed(&orbit_radius_, sizeof orbit_radius_);
    for (double a : angles_) feed(&a, sizeof a);
    return h;
}

bool AcquisitionGeometry::operator==(const AcquisitionGeometry& other) const {
    return angles_ == other.angles_ && detector_pixels_ == other.detector_pixels_ &&
           beam_ == other.beam_ && orbit_radius_ == other.orbit_radius_ &&
           spacing_ == other.spacing_ && full_rotation_ == other.full_rotation_;
}

AcquisitionGeometry build_geometry(int n_views, int detector_pixels, BeamKind kind,
                                   double orbit_radius, double spacing) {
    return AcquisitionGeometry::uniform(n_views, detector_pixels, kind, orbit_radius, spacing);
}

AcquisitionGeometry subsample_geometry(const AcquisitionGeometry& g, int factor) {
    return g.subsample(factor);
}

} // namespace graphct
