#pragma once

#include <functional>
#include <span>
#include <vector>

namespace primecvp {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
    double tol = 1e-6;        // stop once max_i |f_i - f_best| < tol ...
    double xtol = 1e-4;       // ... and every vertex is within xtol of the best one
    int max_iter = -1;        // -1: 400 * dimension
    double initial_step = 0.25;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimisation with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2). Throws
/// OptimizerError on a non-finite objective value. Both stopping conditions
/// must hold, so a simplex started on a plateau still gets to explore.
NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0,
                             const NelderMeadOptions& options = {});

}  // namespace primecvp
