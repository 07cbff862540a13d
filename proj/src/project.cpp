#include "graphct/project.hpp"

#include <cmath>
#include <stdexcept>

#include "graphct/rng.hpp"

namespace graphct {

namespace {

/// Bilinear sample of the grid at physical point (x, y); zero outside.
double sample_grid(const Tensor& grid, double pixel_size, double x, double y) {
    const int h = grid.size(0), w = grid.size(1);
    // Fractional pixel coordinates (row grows downward, y grows upward).
    const double col = x / pixel_size + 0.5 * (w - 1);
    const double row = 0.5 * (h - 1) - y / pixel_size;
    const int c0 = static_cast<int>(std::floor(col));
    const int r0 = static_cast<int>(std::floor(row));
    const double fc = col - c0;
    const double fr = row - r0;
    double acc = 0.0;
    for (int dr = 0; dr <= 1; ++dr) {
        const int r = r0 + dr;
        if (r < 0 || r >= h) continue;
        const double wr = dr == 0 ? 1.0 - fr : fr;
        for (int dc = 0; dc <= 1; ++dc) {
            const int c = c0 + dc;
            if (c < 0 || c >= w) continue;
            const double wc = dc == 0 ? 1.0 - fc : fc;
            acc += wr * wc * grid(r, c);
        }
    }
    return acc;
}

/// Integral of the grid along the segment p0 -> p1 with a fixed step of half
/// a pixel width (midpoint rule).
double integrate_segment(const Tensor& grid, double pixel_size, double x0, double y0, double x1,
                         double y1) {
    const double dx = x1 - x0, dy = y1 - y0;
    const double length = std::hypot(dx, dy);
    if (length <= 0.0) return 0.0;
    const double step = 0.5 * pixel_size;
    const int samples = std::max(1, static_cast<int>(std::ceil(length / step)));
    const double dt = length / static_cast<double>(samples);
    double acc = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(samples);
        acc += sample_grid(grid, pixel_size, x0 + t * dx, y0 + t * dy);
    }
    return acc * dt;
}

} // namespace

Sinogram Sinogram::subsample_views(int factor) const {
    const AcquisitionGeometry sub = geometry.subsample(factor);
    const int kept = sub.view_count();
    const int p = detector_pixel_count();
    Tensor out({kept, p});
    for (int i = 0; i < kept; ++i)
        for (int k = 0; k < p; ++k) out(i, k) = data(i * factor, k);
    return Sinogram{std::move(out), sub};
}

Sinogram forward_project(const Phantom& phantom, const AcquisitionGeometry& geometry) {
    const int n = geometry.view_count();
    const int p = geometry.detector_pixel_count();
    const int h = phantom.height(), w = phantom.width();
    const double px = phantom.pixel_size;
    // Bounding circle of the grid; rays are clipped to it.
    const double r_fov = 0.5 * px * std::hypot(static_cast<double>(h), static_cast<double>(w));

    if (geometry.beam_kind() == BeamKind::fan && geometry.orbit_radius() <= r_fov)
        throw std::invalid_argument(
            "forward_project: fan-beam source orbit lies inside the object support");

    Tensor sino({n, p});
    for (int i = 0; i < n; ++i) {
        const double theta = geometry.source_angles()[static_cast<std::size_t>(i)];
        const double ct = std::cos(theta), st = std::sin(theta);
        for (int k = 0; k < p; ++k) {
            const double s = geometry.detector_coordinate(k);
            double value = 0.0;
            if (geometry.beam_kind() == BeamKind::parallel) {
                // Ray through s*omega, direction omega_perp.
                if (std::abs(s) < r_fov) {
                    const double half = std::sqrt(r_fov * r_fov - s * s);
                    const double ox = s * ct, oy = s * st;
                    const double dx = -st, dy = ct;
                    value = integrate_segment(phantom.grid, px, ox - half * dx, oy - half * dy,
                                              ox + half * dx, oy + half * dy);
                }
            } else {
                // Source on the orbit, virtual flat detector through the origin.
                const double sx = geometry.orbit_radius() * ct;
                const double sy = geometry.orbit_radius() * st;
                const double dxp = -s * st; // detector point = s * t_hat
                const double dyp = s * ct;
                double ux = dxp - sx, uy = dyp - sy;
                const double norm = std::hypot(ux, uy);
                ux /= norm;
                uy /= norm;
                // Clip the ray to the bounding circle: |source + t*u| = r_fov.
                const double b = sx * ux + sy * uy;
                const double c = sx * sx + sy * sy - r_fov * r_fov;
                const double disc = b * b - c;
                if (disc > 0.0) {
                    const double t0 = -b - std::sqrt(disc);
                    const double t1 = -b + std::sqrt(disc);
                    value = integrate_segment(phantom.grid, px, sx + t0 * ux, sy + t0 * uy,
                                              sx + t1 * ux, sy + t1 * uy);
                }
            }
            sino(i, k) = value;
        }
    }
    return Sinogram{std::move(sino), geometry};
}

Sinogram apply_noise(const Sinogram& sinogram, double photons_i0, std::uint64_t seed) {
    if (!(photons_i0 > 0.0)) throw std::invalid_argument("apply_noise: I0 must be positive");
    Rng rng(Rng::mix(seed, 0x6e6f6973ULL));
    Sinogram out = sinogram;
    for (auto& y : out.data.storage()) {
        const double transmitted = photons_i0 * std::exp(-y);
        const double sampled = static_cast<double>(rng.poisson(transmitted));
        y = -std::log(std::max(sampled, 1.0) / photons_i0);
    }
    return out;
}

} // namespace graphct
