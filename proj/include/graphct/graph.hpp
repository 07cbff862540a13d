#pragma once

#include <Eigen/SparseCore>

#include <iosfwd>
#include <vector>

#include "graphct/geometry.hpp"

namespace graphct {

struct GraphEdge {
    int i = 0;
    int j = 0;
    double weight = 0.0;
};

/// Weighted undirected neighbour graph of an acquisition geometry.
///
/// Nodes are source positions; each node is connected to its immediate
/// angular neighbours, with a wrap-around edge exactly when the geometry is
/// a uniform full rotation. Edge weights carry the geometry: cos of the
/// angular gap between the two source positions.
///
/// The structure is always a simple path or a single cycle. Weights are
/// strictly positive; a geometry whose neighbour gaps reach pi/2 or more is
/// rejected when the graph is built, instead of producing zero or negative
/// weights the propagation rules were never validated for.
class GeometryGraph {
public:
    /// Validating constructor for direct (test/oracle) use. Edges are stored
    /// with i < j, sorted ascending.
    GeometryGraph(int node_count, std::vector<GraphEdge> edges, bool cyclic);

    /// Cycle graph on n nodes with every weight exactly 1 — the idealized
    /// densely sampled full rotation.
    static GeometryGraph unit_cycle(int n);
    /// Path graph on n nodes with unit weights.
    static GeometryGraph unit_path(int n);

    int node_count() const { return n_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    bool cyclic() const { return cyclic_; }

    /// Sum of incident edge weights per node (no self loops).
    std::vector<double> degrees() const;

    bool unit_weighted() const;

    /// Graph with nodes relabeled by perm: node v becomes perm[v].
    GeometryGraph permuted(const std::vector<int>& perm) const;

    /// Textual edge list: header "n=<n> cyclic=<0|1>", then one "i j weight"
    /// line per edge, i < j, ascending. Deterministic byte-for-byte.
    void write_edge_list(std::ostream& out) const;
    static GeometryGraph read_edge_list(std::istream& in);

private:
    int n_ = 0;
    std::vector<GraphEdge> edges_;
    bool cyclic_ = false;
};

/// Immediate-neighbour graph of a geometry with cosine angular-gap weights.
/// Throws when any neighbour gap is >= pi/2 (non-positive weight).
GeometryGraph build_graph(const AcquisitionGeometry& geometry);

/// Weighted adjacency W as a sparse symmetric matrix, zero diagonal.
Eigen::SparseMatrix<double> adjacency_matrix(const GeometryGraph& graph);

/// Combinatorial Laplacian L = D - W. Row sums are zero.
Eigen::SparseMatrix<double> laplacian(const GeometryGraph& graph);

/// Normalized Laplacian I - D^{-1/2} W D^{-1/2}; eigenvalues lie in [0, 2].
Eigen::SparseMatrix<double> normalized_laplacian(const GeometryGraph& graph);

/// Propagation matrix Dt^{-1/2} (W + I) Dt^{-1/2} with Dt the degree of the
/// self-loop-augmented adjacency. Symmetric with spectral radius <= 1.
Eigen::SparseMatrix<double> normalized_propagation(const GeometryGraph& graph);

} // namespace graphct
