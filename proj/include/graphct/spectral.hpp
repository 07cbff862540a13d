#pragma once

#include <Eigen/Core>

#include <vector>

#include "graphct/graph.hpp"

namespace graphct {

/// Closed-form eigendecomposition of the Laplacian of the unit-weight cycle
/// graph on n nodes. The Laplacian is circulant, so its eigenvectors are the
/// discrete Fourier basis
///   u_j = (1/sqrt(n)) (1, w^j, w^{2j}, ..., w^{j(n-1)}),  w = exp(2*i*pi/n)
/// with eigenvalues lambda_j = 2 - 2*cos(2*pi*j/n) in [0, 4].
struct CirculantSpectrum {
    int n = 0;
    Eigen::VectorXd eigenvalues;   // lambda_j, j = 0..n-1
    Eigen::MatrixXcd eigenvectors; // row j = u_j
};

CirculantSpectrum circulant_spectrum(int n);

/// Polynomial spectral filter g(lambda) = sum_k coefficients[k] * lambda^k.
struct SpectralFilter {
    std::vector<double> coefficients;

    int order() const { return static_cast<int>(coefficients.size()) - 1; }
    double evaluate(double lambda) const; // Horner
};

/// Spectral convolution U g(Lambda) U^T x on the graph's combinatorial
/// Laplacian. Unit-weight cycles use the closed-form Fourier basis; every
/// other graph goes through a dense symmetric eigendecomposition (test-oracle
/// path, limited to n <= 1024). Eigensolver failure is reported, never
/// silently approximated.
Eigen::VectorXd spectral_convolve(const GeometryGraph& graph, const SpectralFilter& filter,
                                  const Eigen::VectorXd& signal);

} // namespace graphct
