#pragma once

#include <span>
#include <vector>

#include "tsa/arima.hpp"
#include "tsa/series.hpp"

namespace tsa {

/// Forecast bands for one confidence level.
struct ForecastBand {
    double level = 0.0;
    std::vector<double> lower;
    std::vector<double> upper;
};

/// Point forecasts with symmetric Gaussian prediction intervals, sorted by
/// ascending confidence level. Forecast step m covers calendar year
/// origin_year + m + 1.
struct ForecastResult {
    int horizon = 0;
    std::vector<double> point;
    std::vector<ForecastBand> intervals;
    int origin_year = 0;
};

/// First h weights of the MA(infinity) expansion: psi_0 = 1 and
/// psi_j = theta_j + sum_i phi_i psi_{j-i}.
std::vector<double> psi_weights(std::span<const double> phi, std::span<const double> theta, int h);

/// Psi weights of a fitted model, on the scale the forecast variance needs:
/// for d > 0 the AR polynomial is first multiplied by (1 - z)^d.
std::vector<double> psi_weights(const FittedModel& model, int h);

/// AR coefficients of phi(z) * (1 - z)^d, the nonstationary polynomial the
/// integrated process obeys.
std::vector<double> integrated_ar_polynomial(std::span<const double> phi, int d);

/// h-step forecasts from a fitted model. Point forecasts iterate the model
/// recursion with future innovations set to zero (back-integrated when
/// d > 0); the step-m standard error is sigma * sqrt(sum of the first m
/// squared psi weights), and each band is point +/- z_(1+level)/2 * se.
ForecastResult forecast(const FittedModel& model, const TimeSeries& original, int h,
                        std::span<const double> levels);

/// The same point forecasts on the differenced scale (what the recursion
/// produces before back-integration); exposed for consistency checks.
std::vector<double> forecast_differenced(const FittedModel& model, const TimeSeries& original,
                                         int h);

}  // namespace tsa
