#include "graphct/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace graphct {

namespace {
constexpr int kMaxDenseEigensolverSize = 1024;
} // namespace

CirculantSpectrum circulant_spectrum(int n) {
    if (n < 3) throw std::invalid_argument("circulant_spectrum: n must be >= 3");
    CirculantSpectrum s;
    s.n = n;
    s.eigenvalues.resize(n);
    s.eigenvectors.resize(n, n);
    const double base = 2.0 * std::numbers::pi / static_cast<double>(n);
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < n; ++j) {
        s.eigenvalues(j) = 2.0 - 2.0 * std::cos(base * static_cast<double>(j));
        for (int m = 0; m < n; ++m) {
            // w^{jm} with the product reduced mod n to keep the argument small
            const long long e = (static_cast<long long>(j) * m) % n;
            const double phi = base * static_cast<double>(e);
            s.eigenvectors(j, m) = inv_sqrt_n * std::complex<double>(std::cos(phi), std::sin(phi));
        }
    }
    return s;
}

double SpectralFilter::evaluate(double lambda) const {
    if (coefficients.empty()) throw std::invalid_argument("spectral filter has no coefficients");
    double acc = 0.0;
    for (std::size_t k = coefficients.size(); k-- > 0;) acc = acc * lambda + coefficients[k];
    return acc;
}

Eigen::VectorXd spectral_convolve(const GeometryGraph& graph, const SpectralFilter& filter,
                                  const Eigen::VectorXd& signal) {
    const int n = graph.node_count();
    if (signal.size() != n)
        throw std::invalid_argument("spectral_convolve: signal length does not match node count");
    if (filter.coefficients.empty())
        throw std::invalid_argument("spectral_convolve: empty filter");
    for (double c : filter.coefficients)
        if (!std::isfinite(c)) throw std::invalid_argument("spectral_convolve: non-finite filter");

    if (graph.cyclic() && graph.unit_weighted()) {
        // Closed-form Fourier basis of the circulant Laplacian.
        const CirculantSpectrum spec = circulant_spectrum(n);
        Eigen::VectorXcd xc = signal.cast<std::complex<double>>();
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
        for (int j = 0; j < n; ++j) {
            // <u_j, x> with the conjugate-linear inner product
            const std::complex<double> coef = spec.eigenvectors.row(j).dot(xc);
            out += filter.evaluate(spec.eigenvalues(j)) * coef * spec.eigenvectors.row(j).transpose();
        }
        return out.real();
    }

    if (n > kMaxDenseEigensolverSize)
        throw std::invalid_argument(
            "spectral_convolve: dense eigendecomposition path is limited to n <= 1024");
    Eigen::MatrixXd dense = Eigen::MatrixXd(laplacian(graph));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectral_convolve: eigendecomposition failed");
    Eigen::VectorXd g(n);
    for (int j = 0; j < n; ++j) g(j) = filter.evaluate(solver.eigenvalues()(j));
    // U g(Lambda) U^T x
    return solver.eigenvectors() * (g.asDiagonal() * (solver.eigenvectors().transpose() * signal));
}

} // namespace graphct
