#include "graphct/modules.hpp"

#include <stdexcept>

#include "graphct/ops.hpp"

namespace graphct {

GraphContext make_graph_context(const GeometryGraph& graph) {
    GraphContext ctx;
    ctx.n = graph.node_count();
    ctx.propagation = Eigen::SparseMatrix<double, Eigen::RowMajor>(normalized_propagation(graph));
    return ctx;
}

Tensor message_pass(const GraphContext& ctx, const Tensor& features) {
    if (features.rank() != 3)
        throw std::invalid_argument("message_pass: features must be (c, n, P)");
    if (features.size(1) != ctx.n)
        throw std::invalid_argument("message_pass: node axis length does not match graph");
    const int c = features.size(0), n = features.size(1), p = features.size(2);
    Tensor out({c, n, p});
    for (int ch = 0; ch < c; ++ch) {
        const double* fin = features.data() + static_cast<std::size_t>(ch) * n * p;
        double* fout = out.data() + static_cast<std::size_t>(ch) * n * p;
        for (int i = 0; i < n; ++i) {
            double* orow = fout + static_cast<std::size_t>(i) * p;
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(ctx.propagation, i);
                 it; ++it) {
                const double w = it.value();
                const double* jrow = fin + static_cast<std::size_t>(it.col()) * p;
                for (int k = 0; k < p; ++k) orow[k] += w * jrow[k];
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// GlmModule

GlmModule::GlmModule(int c_in, int c_out, int kernel_size, Rng& rng)
    : f0_(c_out, c_in, kernel_size),
      f1_(c_out, c_out, kernel_size),
      gw0_(f0_.weights.shape()),
      gb0_(f0_.bias.shape()),
      gw1_(f1_.weights.shape()),
      gb1_(f1_.bias.shape()) {
    f0_.init_fan_in(rng);
    f1_.init_fan_in(rng);
}

Tensor GlmModule::forward(const GraphContext* ctx, const Tensor& x) {
    if (!ctx) throw std::invalid_argument("glm module: graph context required");
    x_ = x;
    z0_pre_ = conv1d_rows_forward(x, f0_);
    m_ = message_pass(*ctx, relu(z0_pre_));
    Tensor f1_out = conv1d_rows_forward(m_, f1_);
    sum_ = m_;
    sum_.add_scaled(f1_out, 1.0);
    return relu(sum_);
}

Tensor GlmModule::backward(const GraphContext* ctx, const Tensor& grad_out) {
    if (!ctx) throw std::invalid_argument("glm module: graph context required");
    Tensor gsum = relu_backward(sum_, grad_out);
    Tensor gm = conv1d_rows_backward(m_, f1_, gsum, gw1_, gb1_);
    gm.add_scaled(gsum, 1.0);            // residual skip path
    Tensor gz0 = message_pass(*ctx, gm); // propagation is symmetric
    Tensor gz0_pre = relu_backward(z0_pre_, gz0);
    return conv1d_rows_backward(x_, f0_, gz0_pre, gw0_, gb0_);
}

void GlmModule::collect_params(const std::string& prefix, std::vector<ParamRef>& out) {
    out.push_back({prefix + ".f0.weight", &f0_.weights, &gw0_});
    out.push_back({prefix + ".f0.bias", &f0_.bias, &gb0_});
    out.push_back({prefix + ".f1.weight", &f1_.weights, &gw1_});
    out.push_back({prefix + ".f1.bias", &f1_.bias, &gb1_});
}

void GlmModule::zero_grad() {
    gw0_.set_zero();
    gb0_.set_zero();
    gw1_.set_zero();
    gb1_.set_zero();
}

void GlmModule::relu_preacts(std::vector<const Tensor*>& out) const {
    out.push_back(&z0_pre_);
    out.push_back(&sum_);
}

// ---------------------------------------------------------------------------
// CnnModule

CnnModule::CnnModule(int c_in, int c_out, int kernel_size, Rng& rng)
    : f0_(c_out, c_in, kernel_size),
      f1_(c_out, c_out, kernel_size),
      gw0_(f0_.weights.shape()),
      gb0_(f0_.bias.shape()),
      gw1_(f1_.weights.shape()),
      gb1_(f1_.bias.shape()) {
    f0_.init_fan_in(rng);
    f1_.init_fan_in(rng);
}

Tensor CnnModule::forward(const GraphContext* /*ctx*/, const Tensor& x) {
    x_ = x;
    z0_pre_ = conv2d_forward(x, f0_);
    z0_ = relu(z0_pre_);
    Tensor f1_out = conv2d_forward(z0_, f1_);
    sum_ = z0_;
    sum_.add_scaled(f1_out, 1.0);
    return relu(sum_);
}

Tensor CnnModule::backward(const GraphContext* /*ctx*/, const Tensor& grad_out) {
    Tensor gsum = relu_backward(sum_, grad_out);
    Tensor gz0 = conv2d_backward(z0_, f1_, gsum, gw1_, gb1_);
    gz0.add_scaled(gsum, 1.0);
    Tensor gz0_pre = relu_backward(z0_pre_, gz0);
    return conv2d_backward(x_, f0_, gz0_pre, gw0_, gb0_);
}

void CnnModule::collect_params(const std::string& prefix, std::vector<ParamRef>& out) {
    out.push_back({prefix + ".f0.weight", &f0_.weights, &gw0_});
    out.push_back({prefix + ".f0.bias", &f0_.bias, &gb0_});
    out.push_back({prefix + ".f1.weight", &f1_.weights, &gw1_});
    out.push_back({prefix + ".f1.bias", &f1_.bias, &gb1_});
}

void CnnModule::zero_grad() {
    gw0_.set_zero();
    gb0_.set_zero();
    gw1_.set_zero();
    gb1_.set_zero();
}

void CnnModule::relu_preacts(std::vector<const Tensor*>& out) const {
    out.push_back(&z0_pre_);
    out.push_back(&sum_);
}

// ---------------------------------------------------------------------------
// SinogramNetwork

SinogramNetwork::SinogramNetwork(const NetworkSpec& spec, Rng& rng) : spec_(spec) {
    spec_.validate();
    for (const auto& [cin, cout] : module_channel_chain(spec_)) {
        if (spec_.kind == NetworkKind::glm)
            modules_.push_back(std::make_unique<GlmModule>(cin, cout, spec_.kernel_size, rng));
        else
            modules_.push_back(std::make_unique<CnnModule>(cin, cout, spec_.kernel_size, rng));
    }
}

Tensor SinogramNetwork::forward(const GraphContext* ctx, const Tensor& x) {
    if (x.rank() != 3 || x.size(0) != 1)
        throw std::invalid_argument("network: input must be (1, n, P)");
    if (spec_.kind == NetworkKind::glm) {
        if (!ctx) throw std::invalid_argument("network: GLM requires a graph context");
        if (ctx->n != x.size(1))
            throw std::invalid_argument("network: graph size does not match sinogram");
    }
    Tensor h = x;
    for (auto& m : modules_) h = m->forward(ctx, h);
    return h;
}

Tensor SinogramNetwork::backward(const GraphContext* ctx, const Tensor& grad_out) {
    Tensor g = grad_out;
    for (auto it = modules_.rbegin(); it != modules_.rend(); ++it) g = (*it)->backward(ctx, g);
    return g;
}

std::vector<ParamRef> SinogramNetwork::params() {
    std::vector<ParamRef> out;
    for (std::size_t i = 0; i < modules_.size(); ++i)
        modules_[i]->collect_params("module" + std::to_string(i), out);
    return out;
}

void SinogramNetwork::zero_grad() {
    for (auto& m : modules_) m->zero_grad();
}

std::vector<const Tensor*> SinogramNetwork::relu_preacts() const {
    std::vector<const Tensor*> out;
    for (const auto& m : modules_) m->relu_preacts(out);
    return out;
}

long long SinogramNetwork::param_count() {
    long long total = 0;
    for (const auto& p : params()) total += static_cast<long long>(p.value->numel());
    return total;
}

// ---------------------------------------------------------------------------
// GammaNetwork

GammaNetwork::GammaNetwork(int channels, int kernel_size, Rng& rng)
    : l0_(channels, 1, kernel_size),
      l1_(channels, channels, kernel_size),
      l2_(1, channels, kernel_size),
      gw0_(l0_.weights.shape()),
      gb0_(l0_.bias.shape()),
      gw1_(l1_.weights.shape()),
      gb1_(l1_.bias.shape()),
      gw2_(l2_.weights.shape()),
      gb2_(l2_.bias.shape()) {
    l0_.init_fan_in(rng);
    l1_.init_fan_in(rng);
    l2_.init_fan_in(rng);
}

Tensor GammaNetwork::forward(const Tensor& image) {
    if (image.rank() != 3 || image.size(0) != 1)
        throw std::invalid_argument("gamma: input must be (1, H, W)");
    x_ = image;
    a0_pre_ = conv2d_forward(image, l0_);
    a0_ = relu(a0_pre_);
    a1_pre_ = conv2d_forward(a0_, l1_);
    a1_ = relu(a1_pre_);
    return conv2d_forward(a1_, l2_);
}

Tensor GammaNetwork::backward(const Tensor& grad_out) {
    Tensor ga1 = conv2d_backward(a1_, l2_, grad_out, gw2_, gb2_);
    Tensor ga1_pre = relu_backward(a1_pre_, ga1);
    Tensor ga0 = conv2d_backward(a0_, l1_, ga1_pre, gw1_, gb1_);
    Tensor ga0_pre = relu_backward(a0_pre_, ga0);
    return conv2d_backward(x_, l0_, ga0_pre, gw0_, gb0_);
}

std::vector<ParamRef> GammaNetwork::params() {
    return {
        {"gamma.l0.weight", &l0_.weights, &gw0_}, {"gamma.l0.bias", &l0_.bias, &gb0_},
        {"gamma.l1.weight", &l1_.weights, &gw1_}, {"gamma.l1.bias", &l1_.bias, &gb1_},
        {"gamma.l2.weight", &l2_.weights, &gw2_}, {"gamma.l2.bias", &l2_.bias, &gb2_},
    };
}

void GammaNetwork::zero_grad() {
    gw0_.set_zero();
    gb0_.set_zero();
    gw1_.set_zero();
    gb1_.set_zero();
    gw2_.set_zero();
    gb2_.set_zero();
}

} // namespace graphct
