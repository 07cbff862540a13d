#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphct/tensor.hpp"

namespace graphct {

/// Ellipse primitive: center, half axes and rotation in the physical
/// coordinate frame [-1, 1]^2 (y up), additive attenuation value.
struct Ellipse {
    double cx = 0.0;
    double cy = 0.0;
    double a = 0.0;
    double b = 0.0;
    double angle = 0.0;
    double value = 0.0;

    bool contains(double x, double y) const;
};

enum class PhantomKind { shepp_logan, random_ellipses };

PhantomKind phantom_kind_from_string(const std::string& s);
std::string to_string(PhantomKind kind);

/// Rasterized test object: H x W attenuation grid plus the ellipse list it
/// was drawn from. The physical frame is the square [-1, 1]^2; pixel size is
/// 2/max(H, W). Support stays inside the inscribed circle.
struct Phantom {
    Tensor grid; // (H, W)
    double pixel_size = 0.0;
    std::vector<Ellipse> ellipses;

    int height() const { return grid.size(0); }
    int width() const { return grid.size(1); }
    double half_width() const { return 1.0; }

    /// Physical center of pixel (row, col).
    void pixel_center(int row, int col, double* x, double* y) const;
};

/// Deterministic phantom for a given seed. shepp_logan uses the published
/// modified head-phantom ellipse table (max value 1.0); random_ellipses
/// draws 3..8 ellipses with values in [0.2, 1.0], all inside the inscribed
/// circle.
Phantom make_phantom(std::uint64_t seed, int height, int width, PhantomKind kind);

/// Rasterizes an explicit ellipse list (oracle/test path).
Phantom phantom_from_ellipses(std::vector<Ellipse> ellipses, int height, int width);

/// The modified Shepp-Logan ellipse table.
const std::vector<Ellipse>& shepp_logan_ellipses();

} // namespace graphct
