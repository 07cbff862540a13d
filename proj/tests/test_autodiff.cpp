#include <doctest.h>

#include <cmath>
#include <limits>

#include "graphct/conv.hpp"
#include "graphct/gradcheck.hpp"
#include "graphct/graph.hpp"
#include "graphct/modules.hpp"
#include "graphct/ops.hpp"
#include "graphct/rng.hpp"

using namespace graphct;

namespace {

Tensor random_tensor(std::vector<int> shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Tensor t(std::move(shape));
    for (auto& v : t.storage()) v = rng.uniform(lo, hi);
    return t;
}

struct Conv1dFragment {
    ConvKernel1D k;
    Tensor gw, gb, x;

    Conv1dFragment(int co, int ci, int s, Rng& rng)
        : k(co, ci, s), gw(k.weights.shape()), gb(k.bias.shape()) {
        k.init_fan_in(rng);
        for (auto& b : k.bias.storage()) b = rng.uniform(-0.1, 0.1);
    }
    GradCheckTarget target() {
        return {[this](const Tensor& in) {
                    x = in;
                    return conv1d_forward(in, k);
                },
                [this](const Tensor& g) { return conv1d_backward(x, k, g, gw, gb); },
                [this] {
                    gw.set_zero();
                    gb.set_zero();
                },
                {{"weight", &k.weights, &gw}, {"bias", &k.bias, &gb}},
                nullptr};
    }
};

struct Conv2dFragment {
    ConvKernel2D k;
    Tensor gw, gb, x;

    Conv2dFragment(int co, int ci, int s, Rng& rng)
        : k(co, ci, s), gw(k.weights.shape()), gb(k.bias.shape()) {
        k.init_fan_in(rng);
        for (auto& b : k.bias.storage()) b = rng.uniform(-0.1, 0.1);
    }
    GradCheckTarget target() {
        return {[this](const Tensor& in) {
                    x = in;
                    return conv2d_forward(in, k);
                },
                [this](const Tensor& g) { return conv2d_backward(x, k, g, gw, gb); },
                [this] {
                    gw.set_zero();
                    gb.set_zero();
                },
                {{"weight", &k.weights, &gw}, {"bias", &k.bias, &gb}},
                nullptr};
    }
};

} // namespace

TEST_CASE("conv1d gradients match finite differences tightly") {
    Rng rng(41);
    Conv1dFragment frag(3, 2, 5, rng);
    auto target = frag.target();
    const Tensor x = random_tensor({2, 9}, rng);
    const auto report = grad_check(target, x, 1e-6);
    CHECK(report.pass);
    CHECK(report.max_rel_err < 1e-6);
}

TEST_CASE("conv2d gradients match finite differences") {
    Rng rng(43);
    Conv2dFragment frag(2, 2, 3, rng);
    auto target = frag.target();
    const Tensor x = random_tensor({2, 6, 5}, rng);
    const auto report = grad_check(target, x, 1e-5);
    CHECK(report.pass);
}

TEST_CASE("relu gradient, including excluded kink probes") {
    Tensor pre({4}, {0.0, 0.5, -0.5, 2.0});
    struct {
        Tensor cache;
    } state;
    GradCheckTarget target{[&](const Tensor& in) {
                               state.cache = in;
                               return relu(in);
                           },
                           [&](const Tensor& g) { return relu_backward(state.cache, g); },
                           [] {},
                           {},
                           [&]() -> std::vector<const Tensor*> { return {&state.cache}; }};
    const auto report = grad_check(target, pre, 1e-6);
    // entry probed at exactly 0 is reported as excluded, not failed
    CHECK(report.pass);
    CHECK(report.total_excluded == 1);
    REQUIRE(report.entries.size() == 1);
    CHECK(report.entries.back().checked == 3);
}

TEST_CASE("mse gradient against direct finite differences") {
    Rng rng(47);
    const Tensor target_t = random_tensor({3, 4}, rng);
    Tensor x = random_tensor({3, 4}, rng);
    const Tensor analytic = mse_backward(x, target_t);
    const double h = 1e-6;
    for (std::size_t i = 0; i < x.numel(); ++i) {
        const double saved = x[i];
        x[i] = saved + h;
        const double jp = mse_loss(x, target_t);
        x[i] = saved - h;
        const double jm = mse_loss(x, target_t);
        x[i] = saved;
        const double numeric = (jp - jm) / (2.0 * h);
        CHECK(analytic[i] == doctest::Approx(numeric).epsilon(1e-6));
    }
}

TEST_CASE("message passing gradient is the transposed propagation") {
    Rng rng(53);
    const auto graph = GeometryGraph::unit_cycle(6);
    GraphContext ctx = make_graph_context(graph);
    GradCheckTarget target{[&](const Tensor& in) { return message_pass(ctx, in); },
                           [&](const Tensor& g) { return message_pass(ctx, g); },
                           [] {},
                           {},
                           nullptr};
    const Tensor x = random_tensor({2, 6, 3}, rng);
    const auto report = grad_check(target, x, 1e-6);
    CHECK(report.pass);
}

TEST_CASE("full GLM-4 stack passes the gradient check") {
    Rng rng(59);
    const auto geom = AcquisitionGeometry::uniform(
        6, 5, BeamKind::parallel, std::numeric_limits<double>::infinity(), 1.0);
    GraphContext ctx = make_graph_context(build_graph(geom));
    SinogramNetwork net(NetworkSpec{NetworkKind::glm, 4, 7, 3}, rng);
    GradCheckTarget target{[&](const Tensor& in) { return net.forward(&ctx, in); },
                           [&](const Tensor& g) { return net.backward(&ctx, g); },
                           [&] { net.zero_grad(); },
                           net.params(),
                           [&] { return net.relu_preacts(); }};
    const Tensor x = random_tensor({1, 6, 5}, rng, 0.2, 1.0);
    const auto report = grad_check(target, x, 1e-4);
    CHECK(report.pass);
}

TEST_CASE("full CNN-4 stack passes the gradient check") {
    Rng rng(61);
    SinogramNetwork net(NetworkSpec{NetworkKind::cnn, 4, 7, 3}, rng);
    GradCheckTarget target{[&](const Tensor& in) { return net.forward(nullptr, in); },
                           [&](const Tensor& g) { return net.backward(nullptr, g); },
                           [&] { net.zero_grad(); },
                           net.params(),
                           [&] { return net.relu_preacts(); }};
    const Tensor x = random_tensor({1, 6, 5}, rng, 0.2, 1.0);
    const auto report = grad_check(target, x, 1e-4);
    CHECK(report.pass);
}

TEST_CASE("image network passes the gradient check") {
    Rng rng(67);
    GammaNetwork gamma(4, 3, rng);
    GradCheckTarget target{[&](const Tensor& in) { return gamma.forward(in); },
                           [&](const Tensor& g) { return gamma.backward(g); },
                           [&] { gamma.zero_grad(); },
                           gamma.params(),
                           [&] { return gamma.relu_preacts(); }};
    const Tensor x = random_tensor({1, 7, 7}, rng, 0.2, 1.0);
    const auto report = grad_check(target, x, 1e-4);
    CHECK(report.pass);
}
