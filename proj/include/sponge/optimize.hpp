#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace sponge::optimize {

using Objective = std::function<double(const std::vector<double>&)>;

struct Result {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Quasi-Newton ascent with central-difference gradients and a
/// backtracking line search.
Result bfgs_maximize(const Objective& f, std::vector<double> x0, double tol, int max_iterations = 300);

/// Derivative-free ascent; `step` sets the size of the initial simplex.
Result nelder_mead_maximize(const Objective& f, std::vector<double> x0, double step, double tol,
                            int max_iterations = 2000);

}  // namespace sponge::optimize
