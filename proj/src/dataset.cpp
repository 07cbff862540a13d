#include "graphct/dataset.hpp"

#include "graphct/project.hpp"
#include "graphct/rng.hpp"

namespace graphct {

SyntheticDataset make_dataset(const ExperimentConfig& cfg) {
    const auto& d = cfg.dataset;
    SyntheticDataset ds{.train = {},
                        .val = {},
                        .test = {},
                        .geometry = d.make_geometry(),
                        .image = ImageSpec::square(d.image_size)};

    auto build_sample = [&](int index) {
        const std::uint64_t sample_seed = Rng::mix(d.seed, static_cast<std::uint64_t>(index));
        const Phantom phantom = make_phantom(sample_seed, d.image_size, d.image_size, d.phantom);
        const Sinogram clean = forward_project(phantom, ds.geometry);
        const Sinogram noisy = apply_noise(clean, d.photons_i0, sample_seed);
        const int n = noisy.view_count(), p = noisy.detector_pixel_count();
        Sample s;
        s.sinogram = noisy.data.reshaped({1, n, p});
        s.target = phantom.grid.reshaped({1, d.image_size, d.image_size});
        return s;
    };

    int index = 0;
    ds.train.reserve(static_cast<std::size_t>(d.train_count));
    for (int i = 0; i < d.train_count; ++i) ds.train.push_back(build_sample(index++));
    ds.val.reserve(static_cast<std::size_t>(d.val_count));
    for (int i = 0; i < d.val_count; ++i) ds.val.push_back(build_sample(index++));
    ds.test.reserve(static_cast<std::size_t>(d.test_count));
    for (int i = 0; i < d.test_count; ++i) ds.test.push_back(build_sample(index++));
    return ds;
}

} // namespace graphct
