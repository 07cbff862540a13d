#include "graphct/scaling.hpp"

#include <algorithm>
#include <chrono>

#include "graphct/dataset.hpp"
#include "graphct/graph.hpp"
#include "graphct/ops.hpp"
#include "graphct/trainer.hpp"

namespace graphct {

std::vector<ScalingRow> scaling_params_report(const std::vector<NetworkKind>& kinds,
                                              const std::vector<int>& channels, int n, int p) {
    std::vector<ScalingRow> rows;
    const long long plane = static_cast<long long>(n) * p * 8;
    for (NetworkKind kind : kinds) {
        for (int c : channels) {
            NetworkSpec spec{kind, c, 7, 3};
            ScalingRow row;
            row.kind = kind;
            row.channels = c;
            row.params = count_params(spec);
            row.weight_bytes = row.params * 8 * 4; // value, grad, Adam m and v
            long long act = 0;
            for (const auto& [cin, cout] : module_channel_chain(spec)) {
                // forward caches per module: input, pre-activation, activation,
                // (GLM: aggregated features), residual sum, output
                const int planes = kind == NetworkKind::glm ? cin + 5 * cout : cin + 4 * cout;
                act += static_cast<long long>(planes) * plane;
            }
            row.activation_bytes = act;
            if (kind == NetworkKind::glm) {
                // CSR storage of the propagation matrix of the cyclic graph:
                // 3 entries per row (self loop + two neighbours)
                const long long nnz = 3LL * n;
                row.graph_bytes = nnz * (8 + 4) + (static_cast<long long>(n) + 1) * 8;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

double measure_batch_seconds(NetworkKind kind, int channels, int batch_size, int n, int p,
                             int image_size, int repeats, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.network = NetworkSpec{kind, channels, 7, 3};
    cfg.dataset.views = n;
    cfg.dataset.detector_pixels = p;
    cfg.dataset.image_size = image_size;
    cfg.dataset.detector_spacing = 2.2 / static_cast<double>(p);
    cfg.batch_size = batch_size;

    const AcquisitionGeometry geom = cfg.dataset.make_geometry();
    const FbpOperator fbp(geom, ImageSpec::square(image_size));
    GraphContext ctx;
    const bool is_glm = kind == NetworkKind::glm;
    if (is_glm) ctx = make_graph_context(build_graph(geom));

    Pipeline pipeline(cfg, seed);
    auto params = pipeline.params();
    AdamOptimizer opt(params, AdamConfig{.lr = 1e-4});

    Rng rng(Rng::mix(seed, 0x74696d65ULL));
    std::vector<Sample> batch(static_cast<std::size_t>(batch_size));
    for (auto& s : batch) {
        s.sinogram = Tensor({1, n, p});
        for (auto& v : s.sinogram.storage()) v = rng.uniform(0.0, 1.0);
        s.target = Tensor({1, image_size, image_size});
        for (auto& v : s.target.storage()) v = rng.uniform(0.0, 1.0);
    }

    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats + 1; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        pipeline.zero_grad();
        for (const auto& s : batch) {
            Tensor out = pipeline.forward(is_glm ? &ctx : nullptr, fbp, s.sinogram);
            pipeline.backward(is_glm ? &ctx : nullptr, fbp, mse_backward(out, s.target));
        }
        scale_grads(params, 1.0 / static_cast<double>(batch_size));
        opt.step(params);
        const auto t1 = std::chrono::steady_clock::now();
        if (r > 0) // first step warms caches
            times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

std::vector<TimingRow> scaling_timing_report(const std::vector<NetworkKind>& kinds,
                                             const std::vector<int>& channels,
                                             const std::vector<int>& batch_sizes, int n, int p,
                                             int image_size, int repeats, std::uint64_t seed) {
    std::vector<TimingRow> rows;
    for (NetworkKind kind : kinds) {
        for (int c : channels) {
            for (int b : batch_sizes) {
                TimingRow row;
                row.kind = kind;
                row.channels = c;
                row.batch_size = b;
                row.batch_seconds =
                    measure_batch_seconds(kind, c, b, n, p, image_size, repeats, seed);
                rows.push_back(row);
            }
        }
    }
    return rows;
}

} // namespace graphct
