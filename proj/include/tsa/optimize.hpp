#pragma once

#include <functional>
#include <span>
#include <vector>

namespace tsa {

struct NelderMeadOptions {
    /// Converged when max - min of the simplex function values drops below
    /// this spread.
    double ftol = 1e-8;
    /// Hard iteration cap (one reflection cycle per iteration).
    int max_iterations = 500;
};

struct NelderMeadResult {
    std::vector<double> x;
    double fval = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimizer (Nelder-Mead with standard
/// reflection/expansion/contraction/shrink coefficients). `step` gives the
/// per-coordinate displacement used to build the initial simplex around x0.
/// The objective may return +infinity for points it wants rejected.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::span<const double> x0, std::span<const double> step,
                             const NelderMeadOptions& options);

}  // namespace tsa
