#include "graphct/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "graphct/metrics.hpp"
#include "graphct/ops.hpp"

namespace graphct {

Pipeline::Pipeline(const ExperimentConfig& cfg, std::uint64_t weight_seed) {
    Rng net_rng(Rng::mix(weight_seed, 0x6e657477ULL));
    net_ = std::make_unique<SinogramNetwork>(cfg.network, net_rng);
    Rng gamma_rng(Rng::mix(weight_seed, 0x67616d61ULL));
    gamma_ = std::make_unique<GammaNetwork>(cfg.gamma_channels, 3, gamma_rng);
}

std::vector<ParamRef> Pipeline::params() {
    std::vector<ParamRef> all = net_->params();
    for (auto& p : gamma_->params()) all.push_back(p);
    return all;
}

Tensor Pipeline::forward(const GraphContext* ctx, const FbpOperator& fbp, const Tensor& sinogram) {
    Tensor filtered = net_->forward(ctx, sinogram);
    const int n = filtered.size(1), p = filtered.size(2);
    Tensor recon = fbp.apply(filtered.reshaped({n, p}));
    const int h = recon.size(0), w = recon.size(1);
    return gamma_->forward(recon.reshaped({1, h, w}));
}

void Pipeline::backward(const GraphContext* ctx, const FbpOperator& fbp, const Tensor& grad_out) {
    Tensor gimg = gamma_->backward(grad_out);
    const int h = gimg.size(1), w = gimg.size(2);
    Tensor gsino = fbp.apply_transpose(gimg.reshaped({h, w}));
    const int n = gsino.size(0), p = gsino.size(1);
    net_->backward(ctx, gsino.reshaped({1, n, p}));
}

void Pipeline::zero_grad() {
    net_->zero_grad();
    gamma_->zero_grad();
}

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t count, Rng& rng) {
    std::vector<std::size_t> idx(count);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::shuffle(idx.begin(), idx.end(), rng.engine());
    return idx;
}

void check_finite_loss(double loss, const char* where) {
    if (!std::isfinite(loss))
        throw std::runtime_error(std::string(where) + ": loss became non-finite, aborting");
}

} // namespace

std::vector<double> pretrain_autoencode(SinogramNetwork& net, const GraphContext* ctx,
                                        const std::vector<Sample>& data,
                                        const ExperimentConfig& cfg, Rng& rng) {
    std::vector<double> epoch_losses;
    if (cfg.pretrain_epochs == 0 || data.empty()) return epoch_losses;

    auto params = net.params();
    AdamOptimizer opt(params, AdamConfig{.lr = cfg.lr});
    for (int epoch = 0; epoch < cfg.pretrain_epochs; ++epoch) {
        const auto order = shuffled_indices(data.size(), rng);
        double loss_sum = 0.0;
        std::size_t seen = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            net.zero_grad();
            for (std::size_t b = start; b < end; ++b) {
                const Tensor& y = data[order[b]].sinogram;
                Tensor out = net.forward(ctx, y);
                const double loss = mse_loss(out, y);
                check_finite_loss(loss, "pretrain_autoencode");
                loss_sum += loss;
                ++seen;
                net.backward(ctx, mse_backward(out, y));
            }
            scale_grads(params, 1.0 / static_cast<double>(end - start));
            opt.step(params);
        }
        epoch_losses.push_back(loss_sum / static_cast<double>(seen));
    }
    return epoch_losses;
}

double validation_mse(Pipeline& pipeline, const GraphContext* ctx, const FbpOperator& fbp,
                      const std::vector<Sample>& samples) {
    double acc = 0.0;
    for (const auto& s : samples)
        acc += mse_loss(pipeline.forward(ctx, fbp, s.sinogram), s.target);
    return acc / static_cast<double>(samples.size());
}

TrainResult train_pipeline(Pipeline& pipeline, const GraphContext* ctx, const FbpOperator& fbp,
                           const SyntheticDataset& data, const ExperimentConfig& cfg, Rng& rng) {
    TrainResult result;
    result.pretrain_epoch_loss = pretrain_autoencode(pipeline.net(), ctx, data.train, cfg, rng);

    auto params = pipeline.params();
    AdamOptimizer opt(params, AdamConfig{.lr = cfg.lr});
    result.val_mse.push_back(validation_mse(pipeline, ctx, fbp, data.val));

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto order = shuffled_indices(data.train.size(), rng);
        double loss_sum = 0.0;
        std::size_t seen = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            pipeline.zero_grad();
            for (std::size_t b = start; b < end; ++b) {
                const Sample& s = data.train[order[b]];
                Tensor out = pipeline.forward(ctx, fbp, s.sinogram);
                const double loss = mse_loss(out, s.target);
                check_finite_loss(loss, "train_pipeline");
                loss_sum += loss;
                ++seen;
                pipeline.backward(ctx, fbp, mse_backward(out, s.target));
            }
            scale_grads(params, 1.0 / static_cast<double>(end - start));
            opt.step(params);
        }
        result.train_epoch_loss.push_back(loss_sum / static_cast<double>(seen));
        result.val_mse.push_back(validation_mse(pipeline, ctx, fbp, data.val));
    }
    return result;
}

std::vector<SampleMetrics> evaluate_samples(Pipeline& pipeline, const GraphContext* ctx,
                                            const FbpOperator& fbp,
                                            const std::vector<Sample>& samples) {
    std::vector<SampleMetrics> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        const Tensor recon = pipeline.forward(ctx, fbp, s.sinogram);
        const int h = recon.size(1), w = recon.size(2);
        const Tensor recon2d = recon.reshaped({h, w});
        const Tensor target2d = s.target.reshaped({h, w});
        SampleMetrics m;
        const double peak = target2d.max_value();
        m.psnr = psnr(recon2d, target2d, peak > 0.0 ? peak : 1.0);
        m.ssim = ssim(recon2d, target2d);
        out.push_back(m);
    }
    return out;
}

} // namespace graphct
