#pragma once

#include <memory>
#include <vector>

#include "graphct/adam.hpp"
#include "graphct/config.hpp"
#include "graphct/dataset.hpp"
#include "graphct/fbp.hpp"
#include "graphct/modules.hpp"

namespace graphct {

/// Full sinogram-to-image pipeline: sinogram network, fixed filtered
/// backprojection, image network. The backprojection is a constant linear
/// map; its contribution to the backward pass is the exact transpose.
class Pipeline {
public:
    Pipeline(const ExperimentConfig& cfg, std::uint64_t weight_seed);

    SinogramNetwork& net() { return *net_; }
    GammaNetwork& gamma() { return *gamma_; }
    std::vector<ParamRef> params();

    /// (1, n, P) sinogram -> (1, H, W) image. Needs the graph context for a
    /// GLM network (pass nullptr for CNN) and an FBP operator matching the
    /// sinogram's geometry.
    Tensor forward(const GraphContext* ctx, const FbpOperator& fbp, const Tensor& sinogram);
    /// Backward through gamma, the FBP transpose, and the sinogram network.
    void backward(const GraphContext* ctx, const FbpOperator& fbp, const Tensor& grad_out);

    void zero_grad();

private:
    std::unique_ptr<SinogramNetwork> net_;
    std::unique_ptr<GammaNetwork> gamma_;
};

struct TrainResult {
    std::vector<double> pretrain_epoch_loss;
    std::vector<double> train_epoch_loss;
    std::vector<double> val_mse; // entry 0 = before the first epoch
};

/// Sinogram-to-sinogram autoencoding warmup: minimizes MSE(net(Y), Y).
/// Returns the per-epoch mean loss. Aborts on non-finite loss.
std::vector<double> pretrain_autoencode(SinogramNetwork& net, const GraphContext* ctx,
                                        const std::vector<Sample>& data,
                                        const ExperimentConfig& cfg, Rng& rng);

/// End-to-end training of gamma(FBP(net(Y))) against the phantom by MSE.
/// Deterministic given config and rng seed. Aborts on non-finite loss.
TrainResult train_pipeline(Pipeline& pipeline, const GraphContext* ctx, const FbpOperator& fbp,
                           const SyntheticDataset& data, const ExperimentConfig& cfg, Rng& rng);

double validation_mse(Pipeline& pipeline, const GraphContext* ctx, const FbpOperator& fbp,
                      const std::vector<Sample>& samples);

struct SampleMetrics {
    double psnr = 0.0; // +inf for an exact match
    double ssim = 0.0;
};

/// PSNR (peak = target max) and SSIM (8-bit normalized) per sample.
std::vector<SampleMetrics> evaluate_samples(Pipeline& pipeline, const GraphContext* ctx,
                                            const FbpOperator& fbp,
                                            const std::vector<Sample>& samples);

} // namespace graphct
