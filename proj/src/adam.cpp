#include "graphct/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace graphct {

void adam_step(Tensor& param, const Tensor& grad, AdamState& state, const AdamConfig& cfg) {
    if (!param.same_shape(grad)) throw std::invalid_argument("adam_step: shape mismatch");
    if (!grad.all_finite())
        throw std::runtime_error("adam_step: non-finite gradient, training halted");
    if (state.m.numel() == 0) state = AdamState(param.shape());
    if (!state.m.same_shape(param)) throw std::invalid_argument("adam_step: state shape mismatch");

    state.t += 1;
    const double b1t = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double b2t = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < param.numel(); ++i) {
        const double g = grad[i];
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
        const double mhat = state.m[i] / b1t;
        const double vhat = state.v[i] / b2t;
        param[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
}

AdamOptimizer::AdamOptimizer(const std::vector<ParamRef>& params, AdamConfig cfg) : cfg_(cfg) {
    states_.reserve(params.size());
    for (const auto& p : params) states_.emplace_back(p.value->shape());
}

void AdamOptimizer::step(const std::vector<ParamRef>& params) {
    if (params.size() != states_.size())
        throw std::invalid_argument("AdamOptimizer: parameter list changed size");
    for (std::size_t i = 0; i < params.size(); ++i)
        adam_step(*params[i].value, *params[i].grad, states_[i], cfg_);
}

void zero_grads(const std::vector<ParamRef>& params) {
    for (const auto& p : params) p.grad->set_zero();
}

void scale_grads(const std::vector<ParamRef>& params, double factor) {
    for (const auto& p : params)
        for (auto& g : p.grad->storage()) g *= factor;
}

} // namespace graphct
