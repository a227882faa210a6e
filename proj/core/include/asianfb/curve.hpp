#pragma once

#include "asianfb/averaging.hpp"

#include <string>
#include <vector>

namespace asianfb {

/// Sampled free boundary (tau_j, rho_j) with the inputs that produced it.
struct FreeBoundaryCurve {
    std::string label;
    AveragingMethod method;
    ModelParams params;
    std::vector<double> tau;
    std::vector<double> rho;
    std::vector<int> iterations; ///< inner iterations per step; empty for oracle curves
};

struct SolutionField;

/// Copies the boundary out of a solver run.
FreeBoundaryCurve to_curve(const SolutionField& field, std::string label = {});

} // namespace asianfb
