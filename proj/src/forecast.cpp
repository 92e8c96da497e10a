#include "tsa/forecast.hpp"

#include <algorithm>
#include <cmath>

#include "tsa/errors.hpp"
#include "tsa/special.hpp"

namespace tsa {

std::vector<double> psi_weights(std::span<const double> phi, std::span<const double> theta,
                                int h) {
    if (h < 1) throw DegenerateInput("psi_weights requires h >= 1");
    std::vector<double> psi(static_cast<std::size_t>(h), 0.0);
    psi[0] = 1.0;
    for (int j = 1; j < h; ++j) {
        double value = j <= static_cast<int>(theta.size()) ? theta[static_cast<std::size_t>(j - 1)] : 0.0;
        const int reach = std::min<int>(j, static_cast<int>(phi.size()));
        for (int i = 1; i <= reach; ++i) {
            value += phi[static_cast<std::size_t>(i - 1)] * psi[static_cast<std::size_t>(j - i)];
        }
        psi[static_cast<std::size_t>(j)] = value;
    }
    return psi;
}

std::vector<double> integrated_ar_polynomial(std::span<const double> phi, int d) {
    // Multiply 1 - phi_1 z - ... by (1 - z)^d and return the negated tail,
    // i.e. the coefficients phi* of 1 - phi*_1 z - ...
    std::vector<double> poly(phi.size() + 1);
    poly[0] = 1.0;
    for (std::size_t i = 0; i < phi.size(); ++i) poly[i + 1] = -phi[i];
    for (int pass = 0; pass < d; ++pass) {
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= poly[i];
        }
        poly = std::move(next);
    }
    std::vector<double> out(poly.size() - 1);
    for (std::size_t i = 1; i < poly.size(); ++i) out[i - 1] = -poly[i];
    return out;
}

std::vector<double> psi_weights(const FittedModel& model, int h) {
    if (model.order.d == 0) return psi_weights(model.params.phi, model.params.theta, h);
    const std::vector<double> phi_star = integrated_ar_polynomial(model.params.phi, model.order.d);
    return psi_weights(phi_star, model.params.theta, h);
}

std::vector<double> forecast_differenced(const FittedModel& model, const TimeSeries& original,
                                         int h) {
    const DifferencedSeries ds = difference(original, model.order.d);
    const double mu = model.params.mu.value_or(0.0);
    std::vector<double> centered = ds.series.values();
    for (double& x : centered) x -= mu;
    std::vector<double> path =
        arma_forecast_deviations(centered, model.params.phi, model.params.theta, h);
    for (double& x : path) x += mu;
    return path;
}

ForecastResult forecast(const FittedModel& model, const TimeSeries& original, int h,
                        std::span<const double> levels) {
    if (h < 1) throw DegenerateInput("forecast horizon must be at least 1");
    if (levels.empty()) throw DegenerateInput("at least one confidence level is required");
    for (double level : levels) {
        if (!(level > 0.0 && level < 1.0)) {
            throw DegenerateInput("confidence levels must lie in (0, 1)");
        }
    }

    ForecastResult result;
    result.horizon = h;
    result.origin_year = original.end_year();
    result.point = forecast_differenced(model, original, h);

    if (model.order.d > 0) {
        // Back-integrate: track the last value of each differencing level
        // and fold the forecast increments upward.
        std::vector<double> lasts(static_cast<std::size_t>(model.order.d));
        TimeSeries level_series = original;
        for (int j = 0; j < model.order.d; ++j) {
            lasts[static_cast<std::size_t>(j)] = level_series[level_series.size() - 1];
            if (j + 1 < model.order.d) level_series = difference(level_series, 1).series;
        }
        for (double& value : result.point) {
            for (int j = model.order.d - 1; j >= 0; --j) {
                value = lasts[static_cast<std::size_t>(j)] + value;
                lasts[static_cast<std::size_t>(j)] = value;
            }
        }
    }

    const std::vector<double> psi = psi_weights(model, h);
    std::vector<double> se(static_cast<std::size_t>(h));
    double cumulative = 0.0;
    for (int m = 0; m < h; ++m) {
        cumulative += psi[static_cast<std::size_t>(m)] * psi[static_cast<std::size_t>(m)];
        se[static_cast<std::size_t>(m)] = std::sqrt(model.params.sigma2 * cumulative);
    }

    std::vector<double> sorted_levels(levels.begin(), levels.end());
    std::sort(sorted_levels.begin(), sorted_levels.end());
    for (double level : sorted_levels) {
        const double z = normal_quantile(0.5 * (1.0 + level));
        ForecastBand band;
        band.level = level;
        band.lower.resize(static_cast<std::size_t>(h));
        band.upper.resize(static_cast<std::size_t>(h));
        for (int m = 0; m < h; ++m) {
            const double spread = z * se[static_cast<std::size_t>(m)];
            band.lower[static_cast<std::size_t>(m)] = result.point[static_cast<std::size_t>(m)] - spread;
            band.upper[static_cast<std::size_t>(m)] = result.point[static_cast<std::size_t>(m)] + spread;
        }
        result.intervals.push_back(std::move(band));
    }
    return result;
}

}  // namespace tsa
