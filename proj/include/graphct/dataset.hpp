#pragma once

#include <vector>

#include "graphct/config.hpp"
#include "graphct/fbp.hpp"
#include "graphct/geometry.hpp"
#include "graphct/tensor.hpp"

namespace graphct {

/// One training example: noisy sinogram and the phantom it came from.
struct Sample {
    Tensor sinogram; // (1, n, P)
    Tensor target;   // (1, H, W)
};

struct SyntheticDataset {
    std::vector<Sample> train;
    std::vector<Sample> val;
    std::vector<Sample> test;
    AcquisitionGeometry geometry;
    ImageSpec image;
};

/// Deterministic synthetic dataset. Every phantom is its own object, drawn
/// from a per-index seed derived from the dataset seed, so the
/// train/val/test split is a split by object.
SyntheticDataset make_dataset(const ExperimentConfig& cfg);

} // namespace graphct
