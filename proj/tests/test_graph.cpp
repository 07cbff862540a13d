#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "graphct/geometry.hpp"
#include "graphct/graph.hpp"
#include "graphct/rng.hpp"

using namespace graphct;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

GeometryGraph random_weighted_path(int n, Rng& rng) {
    std::vector<GraphEdge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, rng.uniform(0.1, 1.0)});
    return GeometryGraph(n, std::move(edges), false);
}
} // namespace

TEST_CASE("quarter-turn sampling is rejected by the cosine weighting") {
    // cos(pi/2) = 0 would make a degenerate weight
    const auto g4 = build_geometry(4, 8, BeamKind::parallel, kInf, 1.0);
    CHECK_THROWS(build_graph(g4));
    const auto g3 = build_geometry(3, 8, BeamKind::parallel, kInf, 1.0);
    CHECK_THROWS(build_graph(g3));
    // n = 5 is the smallest uniform full rotation with positive weights
    const auto g5 = build_geometry(5, 8, BeamKind::parallel, kInf, 1.0);
    const auto gr5 = build_graph(g5);
    CHECK(gr5.cyclic());
    CHECK(gr5.edges().size() == 5);
}

TEST_CASE("dense sampling gives near-unit weights") {
    const auto g = build_geometry(3600, 16, BeamKind::parallel, kInf, 1.0);
    const auto gr = build_graph(g);
    REQUIRE(gr.cyclic());
    REQUIRE(gr.edges().size() == 3600);
    const double expected = std::cos(2 * kPi / 3600);
    for (const auto& e : gr.edges()) CHECK(e.weight == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("open sampling yields a path graph with cosine weights") {
    const auto g = AcquisitionGeometry::from_angles({0.0, kPi / 6, kPi / 3}, 4,
                                                    BeamKind::parallel, kInf, 1.0);
    const auto gr = build_graph(g);
    CHECK_FALSE(gr.cyclic());
    REQUIRE(gr.edges().size() == 2);
    for (const auto& e : gr.edges())
        CHECK(e.weight == doctest::Approx(std::cos(kPi / 6)).epsilon(1e-12));
    CHECK(gr.edges()[0].weight == doctest::Approx(0.8660).epsilon(1e-4));
}

TEST_CASE("unit cycle Laplacian matches the hand-written matrix") {
    const auto gr = GeometryGraph::unit_cycle(3);
    const Eigen::MatrixXd l = Eigen::MatrixXd(laplacian(gr));
    Eigen::MatrixXd expected(3, 3);
    expected << 2, -1, -1, -1, 2, -1, -1, -1, 2;
    CHECK((l - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Laplacian annihilates constants") {
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = rng.uniform_int(5, 40);
        const auto geom = build_geometry(n * 8, 4, BeamKind::parallel, kInf, 1.0);
        const auto gr = build_graph(geom.subsample(8)); // n views
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(gr.node_count());
        const Eigen::VectorXd lx = laplacian(gr) * ones;
        CHECK(lx.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("Laplacian equals the dense D - W oracle") {
    Rng rng(11);
    const auto gr = random_weighted_path(5, rng);
    // dense construction straight from the definition
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(5, 5);
    for (const auto& e : gr.edges()) {
        w(e.i, e.j) = e.weight;
        w(e.j, e.i) = e.weight;
    }
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(5, 5);
    for (int i = 0; i < 5; ++i) d(i, i) = w.row(i).sum();
    const Eigen::MatrixXd expected = d - w;
    const Eigen::MatrixXd actual = Eigen::MatrixXd(laplacian(gr));
    CHECK((actual - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("normalized propagation of the unit 3-cycle") {
    const auto gr = GeometryGraph::unit_cycle(3);
    const Eigen::MatrixXd p = Eigen::MatrixXd(normalized_propagation(gr));
    // dense oracle: Dt^{-1/2} (W + I) Dt^{-1/2} with Dt = 3 I
    Eigen::MatrixXd expected(3, 3);
    expected << 1, 1, 1, 1, 1, 1, 1, 1, 1;
    expected /= 3.0;
    CHECK((p - expected).cwiseAbs().maxCoeff() < 1e-14);
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(3);
    e0(0) = 1.0;
    const Eigen::VectorXd prop = p * e0;
    for (int i = 0; i < 3; ++i) CHECK(prop(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("single-node propagation is the identity") {
    const GeometryGraph gr(1, {}, false);
    const Eigen::MatrixXd p = Eigen::MatrixXd(normalized_propagation(gr));
    REQUIRE(p.rows() == 1);
    CHECK(p(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("propagation spectrum stays inside the unit interval") {
    SUBCASE("unit 4-cycle hits spectral radius exactly 1") {
        const auto gr = GeometryGraph::unit_cycle(4);
        const Eigen::MatrixXd p = Eigen::MatrixXd(normalized_propagation(gr));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(p);
        CHECK(solver.eigenvalues().cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("random graphs: symmetric, eigenvalues in [-1, 1]") {
        Rng rng(23);
        for (int trial = 0; trial < 20; ++trial) {
            const int n = rng.uniform_int(2, 48);
            const GeometryGraph gr = [&] {
                if (n >= 3 && rng.uniform(0.0, 1.0) < 0.5) {
                    std::vector<GraphEdge> edges;
                    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, rng.uniform(0.05, 1.0)});
                    edges.push_back({0, n - 1, rng.uniform(0.05, 1.0)});
                    return GeometryGraph(n, std::move(edges), true);
                }
                return random_weighted_path(n, rng);
            }();
            const Eigen::MatrixXd p = Eigen::MatrixXd(normalized_propagation(gr));
            CHECK((p - p.transpose()).cwiseAbs().maxCoeff() < 1e-15);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(p);
            CHECK(solver.eigenvalues().minCoeff() > -1.0 - 1e-10);
            CHECK(solver.eigenvalues().maxCoeff() < 1.0 + 1e-10);
        }
    }
}

TEST_CASE("normalized Laplacian spectrum lies in [0, 2]") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = rng.uniform_int(3, 32);
        const auto gr = random_weighted_path(n, rng);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
            Eigen::MatrixXd(normalized_laplacian(gr)));
        CHECK(solver.eigenvalues().minCoeff() > -1e-10);
        CHECK(solver.eigenvalues().maxCoeff() < 2.0 + 1e-10);
    }
}

TEST_CASE("relabeling preserves structure and weights exactly") {
    const auto g = build_geometry(8, 4, BeamKind::parallel, kInf, 1.0);
    const auto gr = build_graph(g);
    const std::vector<int> perm = {3, 5, 0, 7, 1, 2, 6, 4};
    const auto pg = gr.permuted(perm);
    CHECK(pg.cyclic());
    CHECK(pg.edges().size() == gr.edges().size());
    // every original edge appears under the new labels with the same weight
    for (const auto& e : gr.edges()) {
        int a = perm[static_cast<std::size_t>(e.i)];
        int b = perm[static_cast<std::size_t>(e.j)];
        if (a > b) std::swap(a, b);
        bool found = false;
        for (const auto& f : pg.edges())
            if (f.i == a && f.j == b && f.weight == e.weight) found = true;
        CHECK(found);
    }
}

TEST_CASE("edge list dump round-trips and is deterministically ordered") {
    const auto g = build_geometry(6, 4, BeamKind::parallel, kInf, 1.0);
    const auto gr = build_graph(g);
    std::ostringstream out;
    gr.write_edge_list(out);
    const std::string first = out.str();
    CHECK(first.substr(0, 14) == "n=6 cyclic=1\n0");

    std::istringstream in(first);
    const auto parsed = GeometryGraph::read_edge_list(in);
    CHECK(parsed.node_count() == gr.node_count());
    CHECK(parsed.cyclic() == gr.cyclic());
    REQUIRE(parsed.edges().size() == gr.edges().size());
    for (std::size_t i = 0; i < gr.edges().size(); ++i) {
        CHECK(parsed.edges()[i].i == gr.edges()[i].i);
        CHECK(parsed.edges()[i].j == gr.edges()[i].j);
        CHECK(parsed.edges()[i].weight == gr.edges()[i].weight); // %.17g round-trip
    }
    // ascending (i, j) ordering
    for (std::size_t i = 1; i < parsed.edges().size(); ++i) {
        const auto& a = parsed.edges()[i - 1];
        const auto& b = parsed.edges()[i];
        CHECK((a.i < b.i || (a.i == b.i && a.j < b.j)));
    }

    std::ostringstream again;
    parsed.write_edge_list(again);
    CHECK(again.str() == first);
}

TEST_CASE("graph constructor rejects malformed structures") {
    CHECK_THROWS(GeometryGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}, false)); // triangle, not path
    CHECK_THROWS(GeometryGraph(3, {{0, 1, 1.0}}, false));                           // disconnected
    CHECK_THROWS(GeometryGraph(2, {{0, 1, -0.5}}, false));                          // negative weight
    CHECK_THROWS(GeometryGraph(2, {{0, 0, 1.0}}, false));                           // self loop
    CHECK_THROWS(GeometryGraph(2, {{0, 1, 1.0}}, true));                            // 2-cycle
}
