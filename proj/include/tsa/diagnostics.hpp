#pragma once

#include <optional>

#include "tsa/series.hpp"

namespace tsa {

/// Marks a p-value that was clamped to the edge of a published
/// critical-value table instead of being extrapolated.
enum class Clip { none, at_lower, at_upper };

struct TestResult {
    double statistic = 0.0;
    double p_value = 0.0;
    /// Chi-squared degrees of freedom for the portmanteau test; sample size
    /// for the others.
    int df_or_n = 0;
    Clip clipped = Clip::none;
};

/// Ljung-Box portmanteau test that autocorrelations up to `lags` are jointly
/// zero: Q = n(n+2) * sum_k rho_k^2 / (n-k), referred to chi-squared with
/// lags - fitdf degrees of freedom. `fitdf` is the number of coefficients
/// estimated when the input is a residual series.
TestResult ljung_box(const TimeSeries& residuals, int lags, int fitdf = 0,
                     Execution exec = Execution::parallel);

/// Default lag count used for residual checking: min(10, n / 5).
int ljung_box_default_lags(std::size_t n);

/// Shapiro-Wilk normality test for 3 <= n <= 5000, using Royston's
/// normal-score weight corrections and normalizing transform.
TestResult shapiro_wilk(const TimeSeries& x);

/// Blom-style expected normal order statistics used by the Shapiro-Wilk
/// weights; exposed so tests can construct near-perfectly normal samples.
std::vector<double> normal_scores(int n);

/// KPSS level-stationarity test. The long-run variance uses a Bartlett
/// kernel with truncation lag floor(4 * (n/100)^(1/4)) unless `bandwidth`
/// overrides it. The p-value is interpolated from the published critical
/// values {10%: 0.347, 5%: 0.463, 2.5%: 0.574, 1%: 0.739} and clamped to
/// [0.01, 0.1] with the `clipped` flag set accordingly.
TestResult kpss(const TimeSeries& x, std::optional<int> bandwidth = std::nullopt,
                Execution exec = Execution::parallel);

/// Interpolated KPSS critical value for a rejection level in (0, 1);
/// clamped at the ends of the published table.
double kpss_critical_value(double alpha);

}  // namespace tsa
