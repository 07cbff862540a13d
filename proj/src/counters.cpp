#include "graphct/counters.hpp"

namespace graphct {

std::string to_string(NetworkKind kind) { return kind == NetworkKind::glm ? "glm" : "cnn"; }

NetworkKind network_kind_from_string(const std::string& s) {
    if (s == "glm" || s == "GLM") return NetworkKind::glm;
    if (s == "cnn" || s == "CNN") return NetworkKind::cnn;
    throw std::invalid_argument("unknown network kind '" + s + "' (expected glm or cnn)");
}

std::vector<std::pair<int, int>> module_channel_chain(const NetworkSpec& spec) {
    spec.validate();
    std::vector<std::pair<int, int>> chain;
    chain.reserve(static_cast<std::size_t>(spec.module_count));
    for (int i = 0; i < spec.module_count; ++i) {
        const int cin = i == 0 ? 1 : spec.channels;
        const int cout = i == spec.module_count - 1 ? 1 : spec.channels;
        chain.emplace_back(cin, cout);
    }
    return chain;
}

long long count_params(const NetworkSpec& spec) {
    const long long s = spec.kernel_size;
    const long long taps = spec.kind == NetworkKind::glm ? s : s * s;
    long long total = 0;
    for (const auto& [cin, cout] : module_channel_chain(spec)) {
        total += static_cast<long long>(cout) * cin * taps + cout;  // f0 (plain)
        total += static_cast<long long>(cout) * cout * taps + cout; // f1 (residual)
    }
    return total;
}

long long complexity_estimate(NetworkKind kind, long long n, long long p, long long s,
                              long long c_in, long long c_out) {
    if (n < 1 || p < 1 || s < 1 || c_in < 1 || c_out < 1)
        throw std::invalid_argument("complexity_estimate: arguments must be positive");
    if (kind == NetworkKind::glm) return n * p * s * c_in * c_out + 3 * n + n * p * s * c_out * c_out;
    return n * p * s * s * c_in * c_out + n * p * s * s * c_out * c_out;
}

} // namespace graphct
