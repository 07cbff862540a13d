#include "graphct/fbp.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace graphct {

namespace {

int next_pow2_at_least(int value) {
    int n = 1;
    while (n < value) n *= 2;
    return n;
}

} // namespace

struct FbpOperator::Impl {
    AcquisitionGeometry geom;
    ImageSpec image;
    double view_weight = 0.0; // uniform angular gap / 2 (full circle counts rays twice)
    int padded = 0;
    std::vector<double> ramp; // |omega_k| for bins 0..padded/2

    double* real_buf = nullptr;
    fftw_complex* freq_buf = nullptr;
    fftw_plan plan_fwd = nullptr;
    fftw_plan plan_inv = nullptr;

    Impl(const AcquisitionGeometry& g, const ImageSpec& im) : geom(g), image(im) {
        if (image.height < 1 || image.width < 1 || !(image.pixel_size > 0.0))
            throw std::invalid_argument("fbp: invalid image spec");
        const auto& angles = geom.source_angles();
        const int n = geom.view_count();
        if (n < 3) throw std::invalid_argument("fbp: need at least 3 views");
        const double gap = angles[1] - angles[0];
        for (int i = 1; i + 1 < n; ++i) {
            if (std::abs((angles[static_cast<std::size_t>(i) + 1] -
                          angles[static_cast<std::size_t>(i)]) -
                         gap) > 1e-9)
                throw std::invalid_argument("fbp: non-uniform view spacing rejected");
        }
        view_weight = 0.5 * gap;

        const int p = geom.detector_pixel_count();
        padded = next_pow2_at_least(2 * p);
        const double spacing = geom.detector_pixel_spacing();
        ramp.resize(static_cast<std::size_t>(padded / 2 + 1));
        for (int k = 0; k <= padded / 2; ++k)
            ramp[static_cast<std::size_t>(k)] =
                static_cast<double>(k) / (static_cast<double>(padded) * spacing);

        real_buf = fftw_alloc_real(static_cast<std::size_t>(padded));
        freq_buf = fftw_alloc_complex(static_cast<std::size_t>(padded / 2 + 1));
        plan_fwd = fftw_plan_dft_r2c_1d(padded, real_buf, freq_buf, FFTW_ESTIMATE);
        plan_inv = fftw_plan_dft_c2r_1d(padded, freq_buf, real_buf, FFTW_ESTIMATE);
        if (!plan_fwd || !plan_inv) throw std::runtime_error("fbp: FFT plan creation failed");
    }

    ~Impl() {
        if (plan_fwd) fftw_destroy_plan(plan_fwd);
        if (plan_inv) fftw_destroy_plan(plan_inv);
        if (real_buf) fftw_free(real_buf);
        if (freq_buf) fftw_free(freq_buf);
    }

    void filter_row(const double* in, double* out, int p) const {
        for (int k = 0; k < p; ++k) real_buf[k] = in[k];
        for (int k = p; k < padded; ++k) real_buf[k] = 0.0;
        fftw_execute(plan_fwd);
        for (int k = 0; k <= padded / 2; ++k) {
            freq_buf[k][0] *= ramp[static_cast<std::size_t>(k)];
            freq_buf[k][1] *= ramp[static_cast<std::size_t>(k)];
        }
        fftw_execute(plan_inv);
        const double inv_n = 1.0 / static_cast<double>(padded);
        for (int k = 0; k < p; ++k) out[k] = real_buf[k] * inv_n;
    }

    /// Detector coordinate (in pixels, fractional) and amplitude weight of
    /// the ray through physical point (x, y) for view i.
    bool pixel_projection(int view, double x, double y, double* u, double* weight) const {
        const double theta = geom.source_angles()[static_cast<std::size_t>(view)];
        const double ct = std::cos(theta), st = std::sin(theta);
        const int p = geom.detector_pixel_count();
        double s;
        if (geom.beam_kind() == BeamKind::parallel) {
            s = x * ct + y * st;
            *weight = view_weight;
        } else {
            const double rs = geom.orbit_radius();
            const double along = rs - (x * ct + y * st); // distance along the central ray
            if (along <= 0.0) return false;              // behind the source
            s = rs * (-x * st + y * ct) / along;
            *weight = view_weight * (rs * rs) / (along * along);
        }
        *u = s / geom.detector_pixel_spacing() + 0.5 * static_cast<double>(p - 1);
        return *u >= 0.0 && *u <= static_cast<double>(p - 1);
    }
};

FbpOperator::FbpOperator(const AcquisitionGeometry& geometry, const ImageSpec& image)
    : impl_(std::make_unique<Impl>(geometry, image)) {}

FbpOperator::~FbpOperator() = default;

const AcquisitionGeometry& FbpOperator::geometry() const { return impl_->geom; }
const ImageSpec& FbpOperator::image() const { return impl_->image; }

Tensor FbpOperator::filter_rows(const Tensor& sinogram) const {
    const int n = impl_->geom.view_count();
    const int p = impl_->geom.detector_pixel_count();
    if (sinogram.rank() != 2 || sinogram.size(0) != n || sinogram.size(1) != p)
        throw std::invalid_argument("fbp: sinogram shape does not match geometry");
    Tensor filtered({n, p});
    for (int i = 0; i < n; ++i)
        impl_->filter_row(sinogram.data() + static_cast<std::size_t>(i) * p,
                          filtered.data() + static_cast<std::size_t>(i) * p, p);
    return filtered;
}

Tensor FbpOperator::apply(const Tensor& sinogram) const {
    const int n = impl_->geom.view_count();
    const int p = impl_->geom.detector_pixel_count();
    const int h = impl_->image.height, w = impl_->image.width;
    const double px = impl_->image.pixel_size;

    Tensor filtered;
    if (impl_->geom.beam_kind() == BeamKind::fan) {
        // Cosine pre-weighting of the flat-detector rows, then the ramp.
        Tensor weighted = sinogram;
        const double rs = impl_->geom.orbit_radius();
        for (int k = 0; k < p; ++k) {
            const double a = impl_->geom.detector_coordinate(k);
            const double cw = rs / std::sqrt(rs * rs + a * a);
            for (int i = 0; i < n; ++i) weighted(i, k) *= cw;
        }
        filtered = filter_rows(weighted);
    } else {
        filtered = filter_rows(sinogram);
    }

    Tensor img({h, w});
    for (int i = 0; i < n; ++i) {
        const double* row = filtered.data() + static_cast<std::size_t>(i) * p;
        for (int r = 0; r < h; ++r) {
            const double y = (0.5 * (h - 1) - static_cast<double>(r)) * px;
            double* irow = img.data() + static_cast<std::size_t>(r) * w;
            for (int c = 0; c < w; ++c) {
                const double x = (static_cast<double>(c) - 0.5 * (w - 1)) * px;
                double u, wgt;
                if (!impl_->pixel_projection(i, x, y, &u, &wgt)) continue;
                int i0 = static_cast<int>(std::floor(u));
                if (i0 > p - 2) i0 = p - 2;
                if (i0 < 0) i0 = 0;
                const double f = u - static_cast<double>(i0);
                irow[c] += wgt * ((1.0 - f) * row[i0] + f * row[i0 + 1]);
            }
        }
    }
    return img;
}

Tensor FbpOperator::apply_transpose(const Tensor& image) const {
    const int n = impl_->geom.view_count();
    const int p = impl_->geom.detector_pixel_count();
    const int h = impl_->image.height, w = impl_->image.width;
    if (image.rank() != 2 || image.size(0) != h || image.size(1) != w)
        throw std::invalid_argument("fbp transpose: image shape mismatch");
    const double px = impl_->image.pixel_size;

    // Scatter adjoint of the backprojection.
    Tensor scattered({n, p});
    for (int i = 0; i < n; ++i) {
        double* row = scattered.data() + static_cast<std::size_t>(i) * p;
        for (int r = 0; r < h; ++r) {
            const double y = (0.5 * (h - 1) - static_cast<double>(r)) * px;
            const double* irow = image.data() + static_cast<std::size_t>(r) * w;
            for (int c = 0; c < w; ++c) {
                const double x = (static_cast<double>(c) - 0.5 * (w - 1)) * px;
                double u, wgt;
                if (!impl_->pixel_projection(i, x, y, &u, &wgt)) continue;
                int i0 = static_cast<int>(std::floor(u));
                if (i0 > p - 2) i0 = p - 2;
                if (i0 < 0) i0 = 0;
                const double f = u - static_cast<double>(i0);
                const double g = wgt * irow[c];
                row[i0] += (1.0 - f) * g;
                row[i0 + 1] += f * g;
            }
        }
    }

    // Ramp filtering is self-adjoint; fan cosine weighting is diagonal.
    Tensor out = filter_rows(scattered);
    if (impl_->geom.beam_kind() == BeamKind::fan) {
        const double rs = impl_->geom.orbit_radius();
        for (int k = 0; k < p; ++k) {
            const double a = impl_->geom.detector_coordinate(k);
            const double cw = rs / std::sqrt(rs * rs + a * a);
            for (int i = 0; i < n; ++i) out(i, k) *= cw;
        }
    }
    return out;
}

Tensor fbp_reconstruct(const Sinogram& sinogram, const ImageSpec& image) {
    FbpOperator op(sinogram.geometry, image);
    return op.apply(sinogram.data);
}

} // namespace graphct
