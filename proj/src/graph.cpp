#include "graphct/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace graphct {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;
} // namespace

GeometryGraph::GeometryGraph(int node_count, std::vector<GraphEdge> edges, bool cyclic)
    : n_(node_count), edges_(std::move(edges)), cyclic_(cyclic) {
    if (n_ < 1) throw std::invalid_argument("graph: node_count must be >= 1");
    if (cyclic_ && n_ < 3) throw std::invalid_argument("graph: a cycle needs at least 3 nodes");

    for (auto& e : edges_) {
        if (e.i == e.j) throw std::invalid_argument("graph: self loops are not stored");
        if (e.i < 0 || e.j < 0 || e.i >= n_ || e.j >= n_)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw std::invalid_argument("graph: edge weights must be positive and finite");
        if (e.i > e.j) std::swap(e.i, e.j);
    }
    std::sort(edges_.begin(), edges_.end(), [](const GraphEdge& a, const GraphEdge& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    for (std::size_t k = 1; k < edges_.size(); ++k) {
        if (edges_[k - 1].i == edges_[k].i && edges_[k - 1].j == edges_[k].j)
            throw std::invalid_argument("graph: duplicate edge");
    }

    // Structure check: a single cycle (all degrees 2) or a simple path
    // (two endpoints of degree 1, interior degree 2; n=1 has no edges).
    std::vector<int> deg(static_cast<std::size_t>(n_), 0);
    for (const auto& e : edges_) {
        ++deg[static_cast<std::size_t>(e.i)];
        ++deg[static_cast<std::size_t>(e.j)];
    }
    if (cyclic_) {
        if (edges_.size() != static_cast<std::size_t>(n_))
            throw std::invalid_argument("graph: cycle must have exactly n edges");
        for (int d : deg)
            if (d != 2) throw std::invalid_argument("graph: cyclic graph must be 2-regular");
    } else {
        if (edges_.size() + 1 != static_cast<std::size_t>(n_) && n_ != 1)
            throw std::invalid_argument("graph: open path must have n-1 edges");
        int endpoints = 0;
        for (int d : deg) {
            if (d == 1) ++endpoints;
            else if (d != 2 && n_ > 1)
                throw std::invalid_argument("graph: open path degrees must be 1 or 2");
        }
        if (n_ > 1 && endpoints != 2)
            throw std::invalid_argument("graph: open path must have exactly 2 endpoints");
    }
}

GeometryGraph GeometryGraph::unit_cycle(int n) {
    std::vector<GraphEdge> edges;
    edges.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    edges.push_back({0, n - 1, 1.0});
    return GeometryGraph(n, std::move(edges), /*cyclic=*/true);
}

GeometryGraph GeometryGraph::unit_path(int n) {
    std::vector<GraphEdge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    return GeometryGraph(n, std::move(edges), /*cyclic=*/false);
}

std::vector<double> GeometryGraph::degrees() const {
    std::vector<double> d(static_cast<std::size_t>(n_), 0.0);
    for (const auto& e : edges_) {
        d[static_cast<std::size_t>(e.i)] += e.weight;
        d[static_cast<std::size_t>(e.j)] += e.weight;
    }
    return d;
}

bool GeometryGraph::unit_weighted() const {
    return std::all_of(edges_.begin(), edges_.end(),
                       [](const GraphEdge& e) { return e.weight == 1.0; });
}

GeometryGraph GeometryGraph::permuted(const std::vector<int>& perm) const {
    if (perm.size() != static_cast<std::size_t>(n_))
        throw std::invalid_argument("permuted: permutation length mismatch");
    std::vector<GraphEdge> edges = edges_;
    for (auto& e : edges) {
        e.i = perm[static_cast<std::size_t>(e.i)];
        e.j = perm[static_cast<std::size_t>(e.j)];
    }
    return GeometryGraph(n_, std::move(edges), cyclic_);
}

void GeometryGraph::write_edge_list(std::ostream& out) const {
    out << "n=" << n_ << " cyclic=" << (cyclic_ ? 1 : 0) << "\n";
    char buf[64];
    for (const auto& e : edges_) {
        std::snprintf(buf, sizeof buf, "%.17g", e.weight);
        out << e.i << " " << e.j << " " << buf << "\n";
    }
}

GeometryGraph GeometryGraph::read_edge_list(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("graph dump: missing header");
    int n = 0;
    int cyc = 0;
    if (std::sscanf(header.c_str(), "n=%d cyclic=%d", &n, &cyc) != 2)
        throw std::runtime_error("graph dump: malformed header '" + header + "'");
    std::vector<GraphEdge> edges;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        GraphEdge e;
        std::istringstream ls(line);
        if (!(ls >> e.i >> e.j >> e.weight))
            throw std::runtime_error("graph dump: malformed edge line '" + line + "'");
        edges.push_back(e);
    }
    return GeometryGraph(n, std::move(edges), cyc != 0);
}

GeometryGraph build_graph(const AcquisitionGeometry& geometry) {
    const auto& angles = geometry.source_angles();
    const int n = geometry.view_count();
    const bool cyclic = geometry.full_rotation() && n >= 3;

    auto weight_for_gap = [](double gap) {
        if (gap >= kHalfPi)
            throw std::invalid_argument(
                "build_graph: angular gap " + std::to_string(gap) +
                " rad is >= pi/2; cosine weighting would be non-positive. "
                "The weighting scheme is only valid for densely sampled geometries.");
        return std::cos(gap);
    };

    std::vector<GraphEdge> edges;
    edges.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i + 1 < n; ++i) {
        const double gap = angles[static_cast<std::size_t>(i) + 1] - angles[static_cast<std::size_t>(i)];
        edges.push_back({i, i + 1, weight_for_gap(gap)});
    }
    if (cyclic) {
        const double wrap = kTwoPi - (angles.back() - angles.front());
        edges.push_back({0, n - 1, weight_for_gap(wrap)});
    }
    return GeometryGraph(n, std::move(edges), cyclic);
}

Eigen::SparseMatrix<double> adjacency_matrix(const GeometryGraph& graph) {
    const int n = graph.node_count();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(graph.edges().size() * 2);
    for (const auto& e : graph.edges()) {
        trip.emplace_back(e.i, e.j, e.weight);
        trip.emplace_back(e.j, e.i, e.weight);
    }
    Eigen::SparseMatrix<double> w(n, n);
    w.setFromTriplets(trip.begin(), trip.end());
    return w;
}

Eigen::SparseMatrix<double> laplacian(const GeometryGraph& graph) {
    const int n = graph.node_count();
    const auto deg = graph.degrees();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(graph.edges().size() * 2 + static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) trip.emplace_back(i, i, deg[static_cast<std::size_t>(i)]);
    for (const auto& e : graph.edges()) {
        trip.emplace_back(e.i, e.j, -e.weight);
        trip.emplace_back(e.j, e.i, -e.weight);
    }
    Eigen::SparseMatrix<double> l(n, n);
    l.setFromTriplets(trip.begin(), trip.end());
    return l;
}

Eigen::SparseMatrix<double> normalized_laplacian(const GeometryGraph& graph) {
    const int n = graph.node_count();
    const auto deg = graph.degrees();
    std::vector<double> inv_sqrt(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const double d = deg[static_cast<std::size_t>(i)];
        if (!(d > 0.0))
            throw std::invalid_argument("normalized_laplacian: isolated node has zero degree");
        inv_sqrt[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(d);
    }
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < n; ++i) trip.emplace_back(i, i, 1.0);
    for (const auto& e : graph.edges()) {
        const double v = -e.weight * inv_sqrt[static_cast<std::size_t>(e.i)] *
                         inv_sqrt[static_cast<std::size_t>(e.j)];
        trip.emplace_back(e.i, e.j, v);
        trip.emplace_back(e.j, e.i, v);
    }
    Eigen::SparseMatrix<double> l(n, n);
    l.setFromTriplets(trip.begin(), trip.end());
    return l;
}

Eigen::SparseMatrix<double> normalized_propagation(const GeometryGraph& graph) {
    const int n = graph.node_count();
    auto aug_deg = graph.degrees();
    for (auto& d : aug_deg) d += 1.0; // self loop of weight exactly 1
    std::vector<double> inv_sqrt(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double d = aug_deg[static_cast<std::size_t>(i)];
        if (!(d > 0.0))
            throw std::invalid_argument("normalized_propagation: non-positive augmented degree");
        inv_sqrt[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(d);
    }
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(graph.edges().size() * 2 + static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double s = inv_sqrt[static_cast<std::size_t>(i)];
        trip.emplace_back(i, i, s * s);
    }
    for (const auto& e : graph.edges()) {
        const double v = e.weight * inv_sqrt[static_cast<std::size_t>(e.i)] *
                         inv_sqrt[static_cast<std::size_t>(e.j)];
        trip.emplace_back(e.i, e.j, v);
        trip.emplace_back(e.j, e.i, v);
    }
    Eigen::SparseMatrix<double> p(n, n);
    p.setFromTriplets(trip.begin(), trip.end());
    return p;
}

} // namespace graphct
