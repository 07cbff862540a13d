#include "graphct/phantom.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "graphct/rng.hpp"

namespace graphct {

bool Ellipse::contains(double x, double y) const {
    const double dx = x - cx;
    const double dy = y - cy;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double u = (dx * c + dy * s) / a;
    const double v = (-dx * s + dy * c) / b;
    return u * u + v * v <= 1.0;
}

PhantomKind phantom_kind_from_string(const std::string& s) {
    if (s == "shepp_logan") return PhantomKind::shepp_logan;
    if (s == "random_ellipses") return PhantomKind::random_ellipses;
    throw std::invalid_argument("unknown phantom kind '" + s +
                                "' (expected shepp_logan or random_ellipses)");
}

std::string to_string(PhantomKind kind) {
    return kind == PhantomKind::shepp_logan ? "shepp_logan" : "random_ellipses";
}

void Phantom::pixel_center(int row, int col, double* x, double* y) const {
    const int h = height(), w = width();
    *x = (static_cast<double>(col) - 0.5 * (w - 1)) * pixel_size;
    *y = (0.5 * (h - 1) - static_cast<double>(row)) * pixel_size;
}

const std::vector<Ellipse>& shepp_logan_ellipses() {
    // Modified (Toft) variant of the head phantom: same geometry as the
    // original, grey values rescaled so the grid maximum is 1.0.
    static const std::vector<Ellipse> table = {
        {0.0, 0.0, 0.69, 0.92, 0.0, 1.0},
        {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.8},
        {0.22, 0.0, 0.11, 0.31, -18.0 * std::numbers::pi / 180.0, -0.2},
        {-0.22, 0.0, 0.16, 0.41, 18.0 * std::numbers::pi / 180.0, -0.2},
        {0.0, 0.35, 0.21, 0.25, 0.0, 0.1},
        {0.0, 0.1, 0.046, 0.046, 0.0, 0.1},
        {0.0, -0.1, 0.046, 0.046, 0.0, 0.1},
        {-0.08, -0.605, 0.046, 0.023, 0.0, 0.1},
        {0.0, -0.605, 0.023, 0.023, 0.0, 0.1},
        {0.06, -0.605, 0.023, 0.046, 0.0, 0.1},
    };
    return table;
}

Phantom phantom_from_ellipses(std::vector<Ellipse> ellipses, int height, int width) {
    if (height < 32 || width < 32)
        throw std::invalid_argument("phantom: grid must be at least 32x32");
    Phantom p;
    p.pixel_size = 2.0 / static_cast<double>(std::max(height, width));
    p.grid = Tensor({height, width});
    p.ellipses = std::move(ellipses);
    for (int r = 0; r < height; ++r) {
        const double y = (0.5 * (height - 1) - static_cast<double>(r)) * p.pixel_size;
        for (int c = 0; c < width; ++c) {
            const double x = (static_cast<double>(c) - 0.5 * (width - 1)) * p.pixel_size;
            double acc = 0.0;
            for (const auto& e : p.ellipses)
                if (e.contains(x, y)) acc += e.value;
            // overlapping signed values can leave -1e-17 style residue
            p.grid(r, c) = acc > 0.0 ? acc : 0.0;
        }
    }
    return p;
}

Phantom make_phantom(std::uint64_t seed, int height, int width, PhantomKind kind) {
    if (kind == PhantomKind::shepp_logan)
        return phantom_from_ellipses(shepp_logan_ellipses(), height, width);

    Rng rng(Rng::mix(seed, 0x70686d74ULL));
    const int count = rng.uniform_int(3, 8);
    std::vector<Ellipse> ellipses;
    ellipses.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Ellipse e;
        e.a = rng.uniform(0.08, 0.45);
        e.b = rng.uniform(0.08, 0.45);
        // Keep the whole ellipse inside the inscribed circle of radius 0.95.
        const double max_extent = std::max(e.a, e.b);
        const double max_center = 0.95 - max_extent;
        const double radius = rng.uniform(0.0, max_center);
        const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
        e.cx = radius * std::cos(phi);
        e.cy = radius * std::sin(phi);
        e.angle = rng.uniform(0.0, std::numbers::pi);
        e.value = rng.uniform(0.2, 1.0);
        ellipses.push_back(e);
    }
    return phantom_from_ellipses(std::move(ellipses), height, width);
}

} // namespace graphct
