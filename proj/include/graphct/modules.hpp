#pragma once

#include <Eigen/SparseCore>

#include <memory>
#include <string>
#include <vector>

#include "graphct/adam.hpp"
#include "graphct/conv.hpp"
#include "graphct/counters.hpp"
#include "graphct/graph.hpp"
#include "graphct/tensor.hpp"

namespace graphct {

/// Precomputed propagation operator of one graph, shared by every module
/// evaluation against that graph.
struct GraphContext {
    int n = 0;
    Eigen::SparseMatrix<double, Eigen::RowMajor> propagation;
};

GraphContext make_graph_context(const GeometryGraph& graph);

/// Multiplies node features (c, n, P) by the normalized propagation matrix
/// along the node axis, independently per channel and detector pixel. This
/// step has no trainable parameters.
Tensor message_pass(const GraphContext& ctx, const Tensor& features);

/// One sinogram-to-sinogram building block mapping (c_in, n, P) to
/// (c_out, n, P). forward caches what backward needs; backward accumulates
/// parameter gradients and returns the input gradient.
class SinogramModule {
public:
    virtual ~SinogramModule() = default;
    virtual Tensor forward(const GraphContext* ctx, const Tensor& x) = 0;
    virtual Tensor backward(const GraphContext* ctx, const Tensor& grad_out) = 0;
    virtual void collect_params(const std::string& prefix, std::vector<ParamRef>& out) = 0;
    virtual void zero_grad() = 0;
    /// Cached ReLU pre-activations of the last forward pass; the gradient
    /// checker watches their signs to spot non-differentiable probes.
    virtual void relu_preacts(std::vector<const Tensor*>& out) const = 0;
};

/// Hybrid module: a plain 1D convolution filters each measurement, the graph
/// propagation aggregates neighbouring measurements, and a residual 1D
/// convolution refines the result.
///   out = relu(m + conv1d(m)),  m = propagate(relu(conv1d(x)))
class GlmModule : public SinogramModule {
public:
    GlmModule(int c_in, int c_out, int kernel_size, Rng& rng);

    Tensor forward(const GraphContext* ctx, const Tensor& x) override;
    Tensor backward(const GraphContext* ctx, const Tensor& grad_out) override;
    void collect_params(const std::string& prefix, std::vector<ParamRef>& out) override;
    void zero_grad() override;
    void relu_preacts(std::vector<const Tensor*>& out) const override;

    ConvKernel1D& f0() { return f0_; }
    ConvKernel1D& f1() { return f1_; }

private:
    ConvKernel1D f0_, f1_;
    Tensor gw0_, gb0_, gw1_, gb1_;
    Tensor x_, z0_pre_, m_, sum_;
};

/// Grid baseline: same plain + residual two-layer structure with S x S 2D
/// kernels over (n, P) and no graph propagation.
class CnnModule : public SinogramModule {
public:
    CnnModule(int c_in, int c_out, int kernel_size, Rng& rng);

    Tensor forward(const GraphContext* ctx, const Tensor& x) override;
    Tensor backward(const GraphContext* ctx, const Tensor& grad_out) override;
    void collect_params(const std::string& prefix, std::vector<ParamRef>& out) override;
    void zero_grad() override;
    void relu_preacts(std::vector<const Tensor*>& out) const override;

    ConvKernel2D& f0() { return f0_; }
    ConvKernel2D& f1() { return f1_; }

private:
    ConvKernel2D f0_, f1_;
    Tensor gw0_, gb0_, gw1_, gb1_;
    Tensor x_, z0_pre_, z0_, sum_;
};

/// Stack of sinogram modules with channel chain 1 -> c -> ... -> c -> 1.
/// GLM networks need a GraphContext whose node count matches the sinogram's
/// angular dimension; CNN networks ignore it.
class SinogramNetwork {
public:
    SinogramNetwork(const NetworkSpec& spec, Rng& rng);

    Tensor forward(const GraphContext* ctx, const Tensor& x); // (1, n, P) -> (1, n, P)
    Tensor backward(const GraphContext* ctx, const Tensor& grad_out);
    std::vector<ParamRef> params();
    void zero_grad();
    std::vector<const Tensor*> relu_preacts() const;

    const NetworkSpec& spec() const { return spec_; }
    long long param_count();

private:
    NetworkSpec spec_;
    std::vector<std::unique_ptr<SinogramModule>> modules_;
};

/// Plain image-to-image 2D CNN: (1 -> c, 3x3), (c -> c, 3x3), (c -> 1, 3x3)
/// with ReLU between layers. Shared unchanged by both pipelines.
class GammaNetwork {
public:
    GammaNetwork(int channels, int kernel_size, Rng& rng);

    Tensor forward(const Tensor& image); // (1, H, W) -> (1, H, W)
    Tensor backward(const Tensor& grad_out);
    std::vector<ParamRef> params();
    void zero_grad();
    std::vector<const Tensor*> relu_preacts() const { return {&a0_pre_, &a1_pre_}; }

private:
    ConvKernel2D l0_, l1_, l2_;
    Tensor gw0_, gb0_, gw1_, gb1_, gw2_, gb2_;
    Tensor x_, a0_pre_, a0_, a1_pre_, a1_;
};

} // namespace graphct
