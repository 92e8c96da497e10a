#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsa/series.hpp"

namespace tsa {

/// ARIMA(p, d, q) order plus the mean-term flag. A mean term is only
/// meaningful for undifferenced models (d = 0); differencing removes the
/// level.
struct ModelOrder {
    int p = 0;
    int d = 0;
    int q = 0;
    bool include_mean = false;

    /// Number of estimated parameters, counting the innovation variance:
    /// p + q + (1 if mean) + 1.
    int parameter_count() const noexcept { return p + q + (include_mean ? 1 : 0) + 1; }

    /// Throws DegenerateInput for negative orders, d > 4, or a mean term
    /// combined with d > 0.
    void validate() const;

    friend bool operator==(const ModelOrder&, const ModelOrder&) = default;
};

/// Coefficients of a concrete ARIMA model: AR polynomial
/// 1 - phi_1 z - ... - phi_p z^p, MA polynomial 1 + theta_1 z + ... +
/// theta_q z^q, process mean mu (only when the order includes one), and
/// innovation variance sigma2.
struct ArimaParams {
    std::vector<double> phi;
    std::vector<double> theta;
    std::optional<double> mu;
    double sigma2 = 1.0;
};

/// True when all roots of 1 - phi_1 z - ... - phi_p z^p lie strictly
/// outside the unit circle (checked through the partial-autocorrelation
/// representation, which is exact).
bool is_stationary(std::span<const double> phi);

/// True when all roots of 1 + theta_1 z + ... + theta_q z^q lie strictly
/// outside the unit circle.
bool is_invertible(std::span<const double> theta);

/// Durbin-Levinson expansion: maps partial coefficients in (-1, 1) to a
/// stationary AR coefficient vector. The inverse, ar_to_pacf, throws
/// NonStationaryParams when the input vector is not stationary.
std::vector<double> pacf_to_ar(std::span<const double> partials);
std::vector<double> ar_to_pacf(std::span<const double> phi);

/// Smallest root modulus across the AR polynomial 1 - phi_1 z - ... and the
/// MA polynomial 1 + theta_1 z + ...; +infinity when both are constant.
/// Trailing coefficients below 1e-8 are dropped first. Order selection uses
/// this to discard candidates whose roots sit too close to the unit circle.
double min_root_modulus(std::span<const double> phi, std::span<const double> theta);

/// Smallest distance between a root of the AR polynomial and a root of the
/// MA polynomial; +infinity when either side is constant. A near-zero
/// separation means the factors nearly cancel and the model duplicates a
/// lower-order one.
double min_root_separation(std::span<const double> phi, std::span<const double> theta);

/// Regression-form constant alpha = mu * (1 - phi_1 - ... - phi_p).
/// Throws MissingMean for models without a mean term.
double intercept(const ArimaParams& params);

/// A maximum-likelihood fit: coefficients, the maximized exact Gaussian
/// log-likelihood, information criteria, and one-step innovations scaled to
/// constant variance sigma2 (residual t corresponds to observation t of the
/// differenced series).
struct FittedModel {
    ModelOrder order;
    ArimaParams params;
    double loglik = 0.0;
    double aic = 0.0;
    double aicc = 0.0;
    double bic = 0.0;
    TimeSeries residuals;
    int nobs = 0;
    bool converged = true;
};

struct ProfiledLikelihood {
    double loglik = 0.0;  // maximized over sigma2
    double sigma2 = 0.0;  // maximizing innovation variance
};

/// Exact Gaussian log-likelihood with the innovation variance concentrated
/// out analytically. The series is differenced order.d times before
/// evaluation. This is the objective fit() maximizes over (phi, theta, mu).
ProfiledLikelihood profile_log_likelihood(const TimeSeries& ts, const ModelOrder& order,
                                          std::span<const double> phi,
                                          std::span<const double> theta,
                                          std::optional<double> mu);

/// Exact Gaussian log-likelihood at fully specified parameters, computed by
/// a state-space innovations recursion initialized at the stationary state
/// distribution. Throws NonStationaryParams for inadmissible coefficients.
double log_likelihood(const TimeSeries& ts, const ModelOrder& order, const ArimaParams& params);

/// Maximum-likelihood fit. A conditional-sum-of-squares optimum seeds the
/// exact-likelihood optimization; both searches run in an unconstrained
/// partial-autocorrelation parameterization, so every candidate is
/// stationary and invertible. Non-convergence is reported through the
/// `converged` flag with the best point found.
FittedModel fit(const TimeSeries& ts, const ModelOrder& order);

/// Standard errors of (phi..., theta..., mu) from the numerical Hessian of
/// the exact log-likelihood at the fitted parameters. Returns an empty
/// vector when the information matrix is not positive definite, which is the
/// signature of cancelling AR/MA factors or an otherwise unidentified fit.
std::vector<double> coefficient_standard_errors(const TimeSeries& ts, const FittedModel& model);

/// Generate n observations from the model, discarding a burn-in of
/// max(200, 10 * (p + q + 1)) samples. Deterministic for a given seed.
TimeSeries simulate(const ModelOrder& order, const ArimaParams& params, int n,
                    std::uint64_t seed, int start_year = 0,
                    const std::string& label = "simulated");

/// h-step-ahead predictions of the zero-mean ARMA process given its centered
/// history, with future innovations set to zero (the minimum-MSE point
/// path). Building block for the forecast module.
std::vector<double> arma_forecast_deviations(std::span<const double> centered,
                                             std::span<const double> phi,
                                             std::span<const double> theta, int h);

}  // namespace tsa
