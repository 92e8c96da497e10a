#include "tsa/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsa/errors.hpp"

namespace tsa {

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::span<const double> x0, std::span<const double> step,
                             const NelderMeadOptions& options) {
    const std::size_t dim = x0.size();
    if (dim == 0) throw DegenerateInput("nelder_mead requires at least one dimension");
    if (step.size() != dim) throw DegenerateInput("step size must match dimension");

    constexpr double alpha = 1.0;   // reflection
    constexpr double gamma = 2.0;   // expansion
    constexpr double rho = 0.5;     // contraction
    constexpr double sigma = 0.5;   // shrink

    std::vector<std::vector<double>> simplex(dim + 1, std::vector<double>(x0.begin(), x0.end()));
    for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += step[i];

    std::vector<double> fvals(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) fvals[i] = objective(simplex[i]);

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), candidate(dim);

    NelderMeadResult result;
    for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[dim > 0 ? dim - 1 : 0];

        const double spread = fvals[worst] - fvals[best];
        if (std::isfinite(fvals[best]) && spread < options.ftol) {
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double coeff) {
            for (std::size_t j = 0; j < dim; ++j) {
                candidate[j] = centroid[j] + coeff * (simplex[worst][j] - centroid[j]);
            }
            return objective(candidate);
        };

        const double f_reflect = blend(-alpha);
        if (f_reflect < fvals[best]) {
            const std::vector<double> reflected = candidate;
            const double f_expand = blend(-gamma);
            if (f_expand < f_reflect) {
                simplex[worst] = candidate;
                fvals[worst] = f_expand;
            } else {
                simplex[worst] = reflected;
                fvals[worst] = f_reflect;
            }
        } else if (f_reflect < fvals[second_worst]) {
            simplex[worst] = candidate;
            fvals[worst] = f_reflect;
        } else {
            const bool outside = f_reflect < fvals[worst];
            const double f_contract = blend(outside ? -rho : rho);
            if (f_contract < std::min(f_reflect, fvals[worst])) {
                simplex[worst] = candidate;
                fvals[worst] = f_contract;
            } else {
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < dim; ++j) {
                        simplex[i][j] = simplex[best][j] + sigma * (simplex[i][j] - simplex[best][j]);
                    }
                    fvals[i] = objective(simplex[i]);
                }
            }
        }
    }

    const std::size_t best =
        static_cast<std::size_t>(std::min_element(fvals.begin(), fvals.end()) - fvals.begin());
    result.x = simplex[best];
    result.fval = fvals[best];
    return result;
}

}  // namespace tsa
