#include "graphct/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "graphct/checkpoint.hpp"
#include "graphct/config.hpp"
#include "graphct/dataset.hpp"
#include "graphct/gradcheck.hpp"
#include "graphct/graph.hpp"
#include "graphct/io.hpp"
#include "graphct/metrics.hpp"
#include "graphct/scaling.hpp"
#include "graphct/sweep.hpp"
#include "graphct/trainer.hpp"

namespace graphct {

namespace {

constexpr const char* kVersion = "graphct 1.0.0";

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed_override;
};

ExperimentConfig load_config(const CommonArgs& args) {
    ExperimentConfig cfg = args.config_path.empty()
                               ? ExperimentConfig{}
                               : ExperimentConfig::from_file(args.config_path);
    if (args.seed_override) cfg.dataset.seed = *args.seed_override;
    cfg.validate();
    return cfg;
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const ExperimentConfig& cfg, const std::vector<std::string>& outputs) {
    nlohmann::json manifest;
    manifest["command"] = command;
    manifest["version"] = kVersion;
    manifest["seed"] = cfg.dataset.seed;
    manifest["config"] = cfg.to_json();
    manifest["outputs"] = outputs;
    atomic_write_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
}

/// Shared state for commands that need a trained pipeline.
struct PipelineBundle {
    SyntheticDataset data;
    FbpOperator fbp;
    GraphContext ctx;
    bool is_glm = false;
    Pipeline pipeline;

    PipelineBundle(const ExperimentConfig& cfg)
        : data(make_dataset(cfg)),
          fbp(data.geometry, data.image),
          is_glm(cfg.network.kind == NetworkKind::glm),
          pipeline(cfg, cfg.dataset.seed) {
        if (is_glm) ctx = make_graph_context(build_graph(data.geometry));
    }

    const GraphContext* ctx_ptr() const { return is_glm ? &ctx : nullptr; }
};

int cmd_gen_data(const CommonArgs& args) {
    const ExperimentConfig cfg = load_config(args);
    const SyntheticDataset ds = make_dataset(cfg);
    std::vector<std::string> outputs;
    auto dump_split = [&](const char* name, const std::vector<Sample>& samples) {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            char base[64];
            std::snprintf(base, sizeof base, "%s/%s_%04zu", args.out_dir.c_str(), name, i);
            const auto& s = samples[i];
            const int n = s.sinogram.size(1), p = s.sinogram.size(2);
            const int h = s.target.size(1), w = s.target.size(2);
            write_tensor_file(std::string(base) + ".sino.bin", s.sinogram.reshaped({n, p}),
                              "sinogram", ds.geometry.hash());
            write_tensor_file(std::string(base) + ".image.bin", s.target.reshaped({h, w}),
                              "image", 0);
            if (i < 3) {
                write_pgm(std::string(base) + ".sino.pgm", s.sinogram.reshaped({n, p}));
                write_pgm(std::string(base) + ".image.pgm", s.target.reshaped({h, w}));
            }
        }
        outputs.push_back(std::string(name) + " x" + std::to_string(samples.size()));
    };
    dump_split("train", ds.train);
    dump_split("val", ds.val);
    dump_split("test", ds.test);
    write_manifest(args.out_dir, "gen-data", cfg, outputs);
    std::printf("wrote %zu train / %zu val / %zu test samples to %s\n", ds.train.size(),
                ds.val.size(), ds.test.size(), args.out_dir.c_str());
    return 0;
}

int cmd_train(const CommonArgs& args) {
    const ExperimentConfig cfg = load_config(args);
    PipelineBundle b(cfg);
    Rng rng(Rng::mix(cfg.dataset.seed, 0x74726e00ULL));
    const TrainResult result =
        train_pipeline(b.pipeline, b.ctx_ptr(), b.fbp, b.data, cfg, rng);

    const std::string ckpt = args.out_dir + "/checkpoint.bin";
    atomic_write_binary(ckpt, [&] {
        const auto bytes = serialize_weights(b.pipeline.params());
        return std::string(bytes.begin(), bytes.end());
    });

    std::ostringstream curve;
    curve << "epoch,train_loss,val_mse\n";
    curve << "0,," << fmt(result.val_mse[0]) << "\n";
    for (std::size_t e = 0; e < result.train_epoch_loss.size(); ++e)
        curve << (e + 1) << "," << fmt(result.train_epoch_loss[e]) << ","
              << fmt(result.val_mse[e + 1]) << "\n";
    atomic_write_file(args.out_dir + "/loss_curve.csv", curve.str());

    write_manifest(args.out_dir, "train", cfg, {"checkpoint.bin", "loss_curve.csv"});
    std::printf("trained %s: val MSE %.6g -> %.6g (%d epochs)\n", cfg.network.name().c_str(),
                result.val_mse.front(), result.val_mse.back(), cfg.epochs);
    return 0;
}

int cmd_eval(const CommonArgs& args, const std::string& checkpoint) {
    const ExperimentConfig cfg = load_config(args);
    PipelineBundle b(cfg);
    load_weights(checkpoint, b.pipeline.params());

    const auto metrics = evaluate_samples(b.pipeline, b.ctx_ptr(), b.fbp, b.data.test);
    std::vector<double> psnrs, ssims;
    for (const auto& m : metrics) {
        psnrs.push_back(m.psnr);
        ssims.push_back(m.ssim);
    }
    double pm, ps, sm, ss;
    mean_std(psnrs, &pm, &ps);
    mean_std(ssims, &sm, &ss);

    std::ostringstream csv;
    csv << "network,c,factor,psnr_mean,psnr_std,ssim_mean,ssim_std,params\n";
    csv << to_string(cfg.network.kind) << "," << cfg.network.channels << ",1," << fmt(pm) << ","
        << fmt(ps) << "," << fmt(sm) << "," << fmt(ss) << "," << count_params(cfg.network)
        << "\n";
    atomic_write_file(args.out_dir + "/metrics.csv", csv.str());

    // Grayscale histogram of the first test reconstruction vs its target.
    {
        const Sample& s = b.data.test.front();
        const Tensor recon = b.pipeline.forward(b.ctx_ptr(), b.fbp, s.sinogram);
        const int h = recon.size(1), w = recon.size(2);
        const auto hist_recon = grayscale_histogram(quantize_u8(recon.reshaped({h, w})));
        const auto hist_target = grayscale_histogram(quantize_u8(s.target.reshaped({h, w})));
        std::ostringstream hist;
        hist << "bin,target,reconstruction\n";
        for (int i = 0; i < 256; ++i)
            hist << i << "," << fmt(hist_target[static_cast<std::size_t>(i)]) << ","
                 << fmt(hist_recon[static_cast<std::size_t>(i)]) << "\n";
        atomic_write_file(args.out_dir + "/histogram.csv", hist.str());
        write_pgm(args.out_dir + "/recon_0000.pgm", recon.reshaped({h, w}));
        write_pgm(args.out_dir + "/target_0000.pgm", s.target.reshaped({h, w}));
    }

    write_manifest(args.out_dir, "eval", cfg,
                   {"metrics.csv", "histogram.csv", "recon_0000.pgm", "target_0000.pgm"});
    std::printf("eval %s: PSNR %.2f +- %.2f dB, SSIM %.4f +- %.4f\n",
                cfg.network.name().c_str(), pm, ps, sm, ss);
    return 0;
}

int cmd_sweep(const CommonArgs& args, const std::string& checkpoint) {
    const ExperimentConfig cfg = load_config(args);
    PipelineBundle b(cfg);
    load_weights(checkpoint, b.pipeline.params());

    const auto rows = generalization_sweep(b.pipeline, b.data, cfg.sweep_factors);
    std::ostringstream csv;
    csv << "network,c,factor,psnr_mean,psnr_std,ssim_mean,ssim_std,params\n";
    for (const auto& r : rows)
        csv << to_string(cfg.network.kind) << "," << cfg.network.channels << "," << r.factor
            << "," << fmt(r.psnr_mean) << "," << fmt(r.psnr_std) << "," << fmt(r.ssim_mean) << ","
            << fmt(r.ssim_std) << "," << r.params << "\n";
    atomic_write_file(args.out_dir + "/sweep.csv", csv.str());
    write_manifest(args.out_dir, "sweep", cfg, {"sweep.csv"});

    std::printf("sweep %s over %zu factors: PSNR %.2f dB (factor %d) -> %.2f dB (factor %d)\n",
                cfg.network.name().c_str(), rows.size(), rows.front().psnr_mean,
                rows.front().factor, rows.back().psnr_mean, rows.back().factor);
    return 0;
}

int cmd_scaling(const CommonArgs& args, bool skip_timing) {
    const ExperimentConfig cfg = load_config(args);
    const std::vector<NetworkKind> kinds = {NetworkKind::glm, NetworkKind::cnn};
    const std::vector<int> channels = {4, 8, 16, 24, 32, 64};
    const int n = cfg.dataset.views, p = cfg.dataset.detector_pixels;

    const auto rows = scaling_params_report(kinds, channels, n, p);
    std::ostringstream csv;
    csv << "network,c,params,weight_bytes,activation_bytes_per_sample,graph_bytes\n";
    for (const auto& r : rows)
        csv << to_string(r.kind) << "," << r.channels << "," << r.params << "," << r.weight_bytes
            << "," << r.activation_bytes << "," << r.graph_bytes << "\n";
    atomic_write_file(args.out_dir + "/scaling_params.csv", csv.str());
    std::vector<std::string> outputs = {"scaling_params.csv"};

    if (!skip_timing) {
        // Timing is measurement, not derivation: the full channel list would
        // take tens of minutes on the CNN side, so the measured matrix stops
        // at 24 kernels.
        const std::vector<int> timing_channels = {4, 8, 16, 24};
        const std::vector<int> batch_sizes = {2, 4, 6, 8, 10};
        const auto timing =
            scaling_timing_report(kinds, timing_channels, batch_sizes, n, p,
                                  cfg.dataset.image_size, /*repeats=*/1, cfg.dataset.seed);
        std::ostringstream tcsv;
        tcsv << "network,c,batch_size,batch_seconds\n";
        for (const auto& t : timing)
            tcsv << to_string(t.kind) << "," << t.channels << "," << t.batch_size << ","
                 << fmt(t.batch_seconds) << "\n";
        atomic_write_file(args.out_dir + "/scaling_timing.csv", tcsv.str());
        outputs.push_back("scaling_timing.csv");
    }

    write_manifest(args.out_dir, "scaling", cfg, outputs);
    std::printf("scaling report written to %s\n", args.out_dir.c_str());
    return 0;
}

int cmd_graph_dump(const CommonArgs& args, int factor) {
    const ExperimentConfig cfg = load_config(args);
    AcquisitionGeometry geom = cfg.dataset.make_geometry();
    if (factor > 1) geom = geom.subsample(factor);
    const GeometryGraph graph = build_graph(geom);
    std::ostringstream out;
    graph.write_edge_list(out);
    atomic_write_file(args.out_dir + "/graph.txt", out.str());
    write_manifest(args.out_dir, "graph-dump", cfg, {"graph.txt"});
    std::printf("graph: n=%d cyclic=%d edges=%zu -> %s/graph.txt\n", graph.node_count(),
                graph.cyclic() ? 1 : 0, graph.edges().size(), args.out_dir.c_str());
    return 0;
}

int cmd_grad_check(const CommonArgs& args) {
    const ExperimentConfig cfg = load_config(args);
    // Small instances keep the finite-difference sweep fast while touching
    // every operator of both network kinds plus the image network.
    Rng rng(Rng::mix(cfg.dataset.seed, 0x67636b00ULL));
    const GeometryGraph graph = build_graph(
        AcquisitionGeometry::uniform(6, 5, BeamKind::parallel,
                                     std::numeric_limits<double>::infinity(), 1.0));
    GraphContext ctx = make_graph_context(graph);

    bool all_pass = true;
    auto run_network = [&](const char* label, NetworkSpec spec) {
        SinogramNetwork net(spec, rng);
        Tensor x({1, 6, 5});
        for (auto& v : x.storage()) v = rng.uniform(0.2, 1.0);
        const GraphContext* c = spec.kind == NetworkKind::glm ? &ctx : nullptr;
        GradCheckTarget target{
            [&](const Tensor& in) { return net.forward(c, in); },
            [&](const Tensor& g) { return net.backward(c, g); },
            [&] { net.zero_grad(); },
            net.params(),
            [&] { return net.relu_preacts(); },
        };
        std::printf("%s:\n", label);
        const auto report = grad_check(target, x, 1e-4);
        print_report(report);
        all_pass = all_pass && report.pass;
    };
    run_network("GLM-4 stack", NetworkSpec{NetworkKind::glm, 4, 7, 3});
    run_network("CNN-4 stack", NetworkSpec{NetworkKind::cnn, 4, 7, 3});

    {
        GammaNetwork gamma(4, 3, rng);
        Tensor img({1, 8, 8});
        for (auto& v : img.storage()) v = rng.uniform(0.2, 1.0);
        GradCheckTarget target{
            [&](const Tensor& in) { return gamma.forward(in); },
            [&](const Tensor& g) { return gamma.backward(g); },
            [&] { gamma.zero_grad(); },
            gamma.params(),
            [&] { return gamma.relu_preacts(); },
        };
        std::printf("image network:\n");
        const auto report = grad_check(target, img, 1e-4);
        print_report(report);
        all_pass = all_pass && report.pass;
    }

    std::printf("grad-check: %s\n", all_pass ? "all gradients match finite differences"
                                             : "FAILURES detected");
    return all_pass ? 0 : 1;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Graph-based sinogram processing and CT reconstruction toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonArgs args;
    std::string checkpoint;
    int dump_factor = 1;
    bool skip_timing = false;

    auto add_common = [&](CLI::App* sub, bool needs_out = true) {
        sub->add_option("--config", args.config_path, "experiment config (JSON)")
            ->check(CLI::ExistingFile);
        if (needs_out)
            sub->add_option("--out", args.out_dir, "output directory")->required();
        sub->add_option("--seed", args.seed_override, "override the dataset seed");
    };

    CLI::App* gen = app.add_subcommand("gen-data", "generate the synthetic dataset");
    add_common(gen);
    CLI::App* train = app.add_subcommand("train", "train the reconstruction pipeline");
    add_common(train);
    CLI::App* eval = app.add_subcommand("eval", "evaluate a trained pipeline on the test split");
    add_common(eval);
    eval->add_option("--checkpoint", checkpoint, "trained weights")->required();
    CLI::App* sweep =
        app.add_subcommand("sweep", "angular-subsampling generalization sweep (no retraining)");
    add_common(sweep);
    sweep->add_option("--checkpoint", checkpoint, "trained weights")->required();
    CLI::App* scaling = app.add_subcommand("scaling", "parameter/memory/time scaling report");
    add_common(scaling);
    scaling->add_flag("--skip-timing", skip_timing, "write only the exact parameter counts");
    CLI::App* dump = app.add_subcommand("graph-dump", "write the geometry graph edge list");
    add_common(dump);
    dump->add_option("--factor", dump_factor, "subsample the geometry first")
        ->check(CLI::PositiveNumber);
    CLI::App* gradcheck =
        app.add_subcommand("grad-check", "finite-difference check of every gradient");
    add_common(gradcheck, /*needs_out=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_gen_data(args);
        if (train->parsed()) return cmd_train(args);
        if (eval->parsed()) return cmd_eval(args, checkpoint);
        if (sweep->parsed()) return cmd_sweep(args, checkpoint);
        if (scaling->parsed()) return cmd_scaling(args, skip_timing);
        if (dump->parsed()) return cmd_graph_dump(args, dump_factor);
        if (gradcheck->parsed()) return cmd_grad_check(args);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

} // namespace graphct
