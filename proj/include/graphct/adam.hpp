#pragma once

#include <string>
#include <vector>

#include "graphct/tensor.hpp"

namespace graphct {

/// Handle to one named trainable tensor and its gradient buffer.
struct ParamRef {
    std::string name;
    Tensor* value = nullptr;
    Tensor* grad = nullptr;
};

struct AdamConfig {
    double lr = 5e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// First/second moment state for one parameter tensor.
struct AdamState {
    Tensor m;
    Tensor v;
    long long t = 0;

    explicit AdamState(const std::vector<int>& shape) : m(shape), v(shape) {}
    AdamState() = default;
};

/// One bias-corrected Adam update. Throws on non-finite gradients so a
/// diverged run halts instead of propagating NaNs into the weights.
void adam_step(Tensor& param, const Tensor& grad, AdamState& state, const AdamConfig& cfg);

/// Optimizer over a fixed parameter list; keeps one AdamState per tensor.
class AdamOptimizer {
public:
    AdamOptimizer(const std::vector<ParamRef>& params, AdamConfig cfg);

    void step(const std::vector<ParamRef>& params);
    const AdamConfig& config() const { return cfg_; }

private:
    AdamConfig cfg_;
    std::vector<AdamState> states_;
};

void zero_grads(const std::vector<ParamRef>& params);
void scale_grads(const std::vector<ParamRef>& params, double factor);

} // namespace graphct
