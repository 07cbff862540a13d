#pragma once

#include <vector>

#include "graphct/dataset.hpp"
#include "graphct/trainer.hpp"

namespace graphct {

struct SweepRow {
    int factor = 1;
    double psnr_mean = 0.0;
    double psnr_std = 0.0;
    double ssim_mean = 0.0;
    double ssim_std = 0.0;
    long long params = 0;
};

/// Evaluates a trained pipeline on angularly subsampled test data without
/// touching the weights. Per factor the geometry is subsampled, the graph is
/// rebuilt (GLM) or skipped (CNN, which sees the reduced-height sinogram at
/// its native size), and the whole pipeline re-runs.
std::vector<SweepRow> generalization_sweep(Pipeline& pipeline, const SyntheticDataset& data,
                                           const std::vector<int>& factors);

/// Mean/population-std helper shared by sweep and eval reporting.
void mean_std(const std::vector<double>& values, double* mean, double* std_dev);

} // namespace graphct
