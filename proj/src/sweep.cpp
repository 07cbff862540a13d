#include "graphct/sweep.hpp"

#include <cmath>

#include "graphct/graph.hpp"
#include "graphct/project.hpp"

namespace graphct {

void mean_std(const std::vector<double>& values, double* mean, double* std_dev) {
    double m = 0.0;
    for (double v : values) m += v;
    m /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - m) * (v - m);
    var /= static_cast<double>(values.size());
    *mean = m;
    *std_dev = std::sqrt(var);
}

std::vector<SweepRow> generalization_sweep(Pipeline& pipeline, const SyntheticDataset& data,
                                           const std::vector<int>& factors) {
    const bool is_glm = pipeline.net().spec().kind == NetworkKind::glm;
    std::vector<SweepRow> rows;
    rows.reserve(factors.size());
    for (int factor : factors) {
        const AcquisitionGeometry sub_geom = data.geometry.subsample(factor);
        const FbpOperator fbp(sub_geom, data.image);
        GraphContext ctx;
        if (is_glm) ctx = make_graph_context(build_graph(sub_geom));

        std::vector<Sample> subsampled;
        subsampled.reserve(data.test.size());
        const int p = data.geometry.detector_pixel_count();
        const int kept = sub_geom.view_count();
        for (const auto& s : data.test) {
            Sample sub;
            sub.target = s.target;
            sub.sinogram = Tensor({1, kept, p});
            for (int i = 0; i < kept; ++i)
                for (int k = 0; k < p; ++k) sub.sinogram(0, i, k) = s.sinogram(0, i * factor, k);
            subsampled.push_back(std::move(sub));
        }

        const auto metrics =
            evaluate_samples(pipeline, is_glm ? &ctx : nullptr, fbp, subsampled);
        std::vector<double> psnrs, ssims;
        psnrs.reserve(metrics.size());
        ssims.reserve(metrics.size());
        for (const auto& m : metrics) {
            psnrs.push_back(m.psnr);
            ssims.push_back(m.ssim);
        }
        SweepRow row;
        row.factor = factor;
        row.params = pipeline.net().param_count();
        mean_std(psnrs, &row.psnr_mean, &row.psnr_std);
        mean_std(ssims, &row.ssim_mean, &row.ssim_std);
        rows.push_back(row);
    }
    return rows;
}

} // namespace graphct
