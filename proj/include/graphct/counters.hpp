#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace graphct {

enum class NetworkKind { glm, cnn };

std::string to_string(NetworkKind kind);
NetworkKind network_kind_from_string(const std::string& s);

/// Sinogram-network architecture: module_count stacked modules with odd
/// kernel size S and channel chain 1 -> c -> ... -> c -> 1.
struct NetworkSpec {
    NetworkKind kind = NetworkKind::glm;
    int channels = 8;
    int kernel_size = 7;
    int module_count = 3;

    void validate() const {
        if (channels < 1) throw std::invalid_argument("network: channels must be >= 1");
        if (kernel_size < 1 || kernel_size % 2 == 0)
            throw std::invalid_argument("network: kernel size must be odd and positive");
        if (module_count < 1) throw std::invalid_argument("network: module_count must be >= 1");
    }

    std::string name() const {
        return (kind == NetworkKind::glm ? "GLM-" : "CNN-") + std::to_string(channels);
    }
};

/// Per-module (c_in, c_out) pairs of the 1 -> c -> ... -> c -> 1 chain.
std::vector<std::pair<int, int>> module_channel_chain(const NetworkSpec& spec);

/// Exact trainable parameter count of the sinogram network: per module the
/// plain and residual convolutions, each with a per-output-channel bias.
/// GLM kernels are 1D (length S), CNN kernels are S x S.
long long count_params(const NetworkSpec& spec);

/// Multiply-accumulate count of one module evaluation.
///   GLM: n*P*S*c_in*c_out + 3n + n*P*S*c_out^2
///   CNN: n*P*S^2*c_in*c_out + n*P*S^2*c_out^2
/// The 3n term is the neighbourhood aggregation: two neighbours plus a self
/// loop per node.
long long complexity_estimate(NetworkKind kind, long long n, long long p, long long s,
                              long long c_in, long long c_out);

} // namespace graphct
