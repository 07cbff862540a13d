#pragma once

#include <functional>
#include <string>
#include <vector>

#include "graphct/adam.hpp"
#include "graphct/tensor.hpp"

namespace graphct {

/// A differentiable fragment under test: a stateful forward, the matching
/// backward (fills the parameter gradient buffers and returns the input
/// gradient), and the parameter list. relu_preacts, when set, returns the
/// cached ReLU pre-activations of the last forward pass; the checker
/// compares their signs between the +h and -h evaluations and excludes
/// probes that cross a kink instead of failing them.
struct GradCheckTarget {
    std::function<Tensor(const Tensor&)> forward;
    std::function<Tensor(const Tensor&)> backward; // argument: dJ/d(output)
    std::function<void()> zero_grad;
    std::vector<ParamRef> params;
    std::function<std::vector<const Tensor*>()> relu_preacts; // optional
};

struct GradCheckEntry {
    std::string name; // parameter name or "input"
    double max_rel_err = 0.0;
    int checked = 0;
    int excluded = 0;
};

struct GradCheckReport {
    std::vector<GradCheckEntry> entries;
    double max_rel_err = 0.0;
    int total_excluded = 0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Compares analytic gradients of J = mean(forward(x)^2) against central
/// finite differences for every parameter entry and every input entry.
GradCheckReport grad_check(GradCheckTarget& target, const Tensor& input, double tolerance,
                           double step = 1e-5);

void print_report(const GradCheckReport& report);

} // namespace graphct
