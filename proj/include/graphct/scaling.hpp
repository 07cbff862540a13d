#pragma once

#include <cstdint>
#include <vector>

#include "graphct/counters.hpp"

namespace graphct {

struct ScalingRow {
    NetworkKind kind = NetworkKind::glm;
    int channels = 0;
    long long params = 0;
    long long weight_bytes = 0;     // weights + grads + both Adam moments
    long long activation_bytes = 0; // per-sample forward caches of the sinogram net
    long long graph_bytes = 0;      // sparse propagation storage (GLM only)
};

struct TimingRow {
    NetworkKind kind = NetworkKind::glm;
    int channels = 0;
    int batch_size = 0;
    double batch_seconds = 0.0;
};

/// Exact parameter counts plus an analytic per-sample memory estimate for a
/// sinogram of n views and P detector pixels.
std::vector<ScalingRow> scaling_params_report(const std::vector<NetworkKind>& kinds,
                                              const std::vector<int>& channels, int n, int p);

/// Measured wall-clock of one training step (forward, backward, Adam) of the
/// full pipeline at the given batch sizes; median of `repeats` runs.
std::vector<TimingRow> scaling_timing_report(const std::vector<NetworkKind>& kinds,
                                             const std::vector<int>& channels,
                                             const std::vector<int>& batch_sizes, int n, int p,
                                             int image_size, int repeats, std::uint64_t seed);

/// Single timing measurement used by the report and by the ordering check.
double measure_batch_seconds(NetworkKind kind, int channels, int batch_size, int n, int p,
                             int image_size, int repeats, std::uint64_t seed);

} // namespace graphct
