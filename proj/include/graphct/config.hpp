#pragma once

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphct/counters.hpp"
#include "graphct/geometry.hpp"
#include "graphct/phantom.hpp"

namespace graphct {

/// Raised for malformed configuration (unknown keys, bad values). The CLI
/// maps it to the usage exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Desk-scale defaults. The beam is fan (circular orbit, flat virtual
/// detector through the isocenter): a full-circle parallel scan wastes half
/// its views on pi-opposite duplicates whenever an even number of views
/// survives subsampling, which would make subsampling quality jump instead
/// of decay.
struct DatasetConfig {
    PhantomKind phantom = PhantomKind::random_ellipses;
    int train_count = 200;
    int val_count = 32;
    int test_count = 32;
    std::uint64_t seed = 1234;
    int image_size = 64;
    int views = 90;
    int detector_pixels = 96;
    double detector_spacing = 0.024;
    BeamKind beam = BeamKind::fan;
    double orbit_radius = 4.0; // only used for fan beam
    double photons_i0 = 1e5;

    AcquisitionGeometry make_geometry() const;
};

/// One experiment: network, training hyperparameters, synthetic dataset and
/// the subsampling sweep. The config file is the single source of truth;
/// command-line flags only override seed and paths.
struct ExperimentConfig {
    NetworkSpec network{NetworkKind::glm, 8, 7, 3};
    int gamma_channels = 16;
    double lr = 5e-5;
    int batch_size = 8;
    int epochs = 10;
    int pretrain_epochs = 1;
    DatasetConfig dataset;
    std::vector<int> sweep_factors = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    void validate() const; // throws ConfigError naming the violated constraint

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig from_file(const std::string& path);
    nlohmann::json to_json() const;
};

} // namespace graphct
