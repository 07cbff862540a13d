#include "graphct/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <limits>

namespace graphct {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        if (!known)
            throw ConfigError("config: unknown key '" + (path.empty() ? key : path + "." + key) +
                              "'");
    }
}

template <typename T>
T fetch(const json& j, const std::string& path, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config: bad value for '" + path + "." + key + "'");
    }
}

} // namespace

AcquisitionGeometry DatasetConfig::make_geometry() const {
    const double radius = beam == BeamKind::parallel
                              ? std::numeric_limits<double>::infinity()
                              : orbit_radius;
    return AcquisitionGeometry::uniform(views, detector_pixels, beam, radius, detector_spacing);
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
    try {
        network.validate();
    } catch (const std::exception& e) {
        fail(e.what());
    }
    if (gamma_channels < 1) fail("gamma.channels must be >= 1");
    if (!(lr > 0.0)) fail("training.lr must be > 0");
    if (batch_size < 1) fail("training.batch_size must be >= 1");
    if (epochs < 0) fail("training.epochs must be >= 0");
    if (pretrain_epochs < 0) fail("training.pretrain_epochs must be >= 0");
    if (dataset.train_count < 1) fail("dataset.train must be >= 1");
    if (dataset.val_count < 1) fail("dataset.val must be >= 1");
    if (dataset.test_count < 1) fail("dataset.test must be >= 1");
    if (dataset.image_size < 32) fail("dataset.image_size must be >= 32");
    if (dataset.views < 3) fail("dataset.views must be >= 3");
    if (dataset.detector_pixels < 1) fail("dataset.detector_pixels must be >= 1");
    if (!(dataset.detector_spacing > 0.0)) fail("dataset.detector_spacing must be > 0");
    if (!(dataset.photons_i0 > 0.0)) fail("dataset.photons_i0 must be > 0");
    if (dataset.beam == BeamKind::fan && !(dataset.orbit_radius > 0.0))
        fail("dataset.orbit_radius must be > 0 for fan beam");
    if (sweep_factors.empty()) fail("sweep.factors must not be empty");
    for (int f : sweep_factors)
        if (f < 1) fail("sweep.factors: each factor must be >= 1");
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig cfg;
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    check_keys(j, "", {"network", "gamma", "training", "dataset", "sweep"});

    if (j.contains("network")) {
        const json& n = j.at("network");
        check_keys(n, "network", {"kind", "channels", "kernel_size", "module_count"});
        const std::string kind = fetch<std::string>(n, "network", "kind", "glm");
        try {
            cfg.network.kind = network_kind_from_string(kind);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: network.kind: ") + e.what());
        }
        cfg.network.channels = fetch<int>(n, "network", "channels", cfg.network.channels);
        cfg.network.kernel_size = fetch<int>(n, "network", "kernel_size", cfg.network.kernel_size);
        cfg.network.module_count =
            fetch<int>(n, "network", "module_count", cfg.network.module_count);
    }
    if (j.contains("gamma")) {
        const json& g = j.at("gamma");
        check_keys(g, "gamma", {"channels"});
        cfg.gamma_channels = fetch<int>(g, "gamma", "channels", cfg.gamma_channels);
    }
    if (j.contains("training")) {
        const json& t = j.at("training");
        check_keys(t, "training", {"lr", "batch_size", "epochs", "pretrain_epochs"});
        cfg.lr = fetch<double>(t, "training", "lr", cfg.lr);
        cfg.batch_size = fetch<int>(t, "training", "batch_size", cfg.batch_size);
        cfg.epochs = fetch<int>(t, "training", "epochs", cfg.epochs);
        cfg.pretrain_epochs = fetch<int>(t, "training", "pretrain_epochs", cfg.pretrain_epochs);
    }
    if (j.contains("dataset")) {
        const json& d = j.at("dataset");
        check_keys(d, "dataset",
                   {"phantom", "train", "val", "test", "seed", "image_size", "views",
                    "detector_pixels", "detector_spacing", "beam", "orbit_radius", "photons_i0"});
        const std::string ph = fetch<std::string>(d, "dataset", "phantom", "random_ellipses");
        try {
            cfg.dataset.phantom = phantom_kind_from_string(ph);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: dataset.phantom: ") + e.what());
        }
        cfg.dataset.train_count = fetch<int>(d, "dataset", "train", cfg.dataset.train_count);
        cfg.dataset.val_count = fetch<int>(d, "dataset", "val", cfg.dataset.val_count);
        cfg.dataset.test_count = fetch<int>(d, "dataset", "test", cfg.dataset.test_count);
        cfg.dataset.seed = fetch<std::uint64_t>(d, "dataset", "seed", cfg.dataset.seed);
        cfg.dataset.image_size = fetch<int>(d, "dataset", "image_size", cfg.dataset.image_size);
        cfg.dataset.views = fetch<int>(d, "dataset", "views", cfg.dataset.views);
        cfg.dataset.detector_pixels =
            fetch<int>(d, "dataset", "detector_pixels", cfg.dataset.detector_pixels);
        cfg.dataset.detector_spacing =
            fetch<double>(d, "dataset", "detector_spacing", cfg.dataset.detector_spacing);
        const std::string beam = fetch<std::string>(d, "dataset", "beam", "parallel");
        if (beam == "parallel") cfg.dataset.beam = BeamKind::parallel;
        else if (beam == "fan") cfg.dataset.beam = BeamKind::fan;
        else throw ConfigError("config: dataset.beam must be 'parallel' or 'fan'");
        cfg.dataset.orbit_radius =
            fetch<double>(d, "dataset", "orbit_radius", cfg.dataset.orbit_radius);
        cfg.dataset.photons_i0 = fetch<double>(d, "dataset", "photons_i0", cfg.dataset.photons_i0);
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        check_keys(s, "sweep", {"factors"});
        cfg.sweep_factors =
            fetch<std::vector<int>>(s, "sweep", "factors", cfg.sweep_factors);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config: parse error in '" + path + "': " + e.what());
    }
    return from_json(j);
}

nlohmann::json ExperimentConfig::to_json() const {
    json j;
    j["network"] = {{"kind", to_string(network.kind)},
                    {"channels", network.channels},
                    {"kernel_size", network.kernel_size},
                    {"module_count", network.module_count}};
    j["gamma"] = {{"channels", gamma_channels}};
    j["training"] = {{"lr", lr},
                     {"batch_size", batch_size},
                     {"epochs", epochs},
                     {"pretrain_epochs", pretrain_epochs}};
    j["dataset"] = {{"phantom", to_string(dataset.phantom)},
                    {"train", dataset.train_count},
                    {"val", dataset.val_count},
                    {"test", dataset.test_count},
                    {"seed", dataset.seed},
                    {"image_size", dataset.image_size},
                    {"views", dataset.views},
                    {"detector_pixels", dataset.detector_pixels},
                    {"detector_spacing", dataset.detector_spacing},
                    {"beam", dataset.beam == BeamKind::parallel ? "parallel" : "fan"},
                    {"orbit_radius", dataset.orbit_radius},
                    {"photons_i0", dataset.photons_i0}};
    j["sweep"] = {{"factors", sweep_factors}};
    return j;
}

} // namespace graphct
