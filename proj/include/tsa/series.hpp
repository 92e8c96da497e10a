#pragma once

#include <span>
#include <string>
#include <vector>

#include "tsa/execution.hpp"

namespace tsa {

/// An annual time series: finite values, one per consecutive calendar year.
/// Immutable after construction; observation i belongs to year
/// start_year() + i. Construction rejects empty input and non-finite values.
class TimeSeries {
public:
    TimeSeries(std::vector<double> values, int start_year, std::string label = "");

    const std::vector<double>& values() const noexcept { return values_; }
    std::span<const double> view() const noexcept { return values_; }
    int start_year() const noexcept { return start_year_; }
    const std::string& label() const noexcept { return label_; }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    int year_at(std::size_t i) const noexcept { return start_year_ + static_cast<int>(i); }
    int end_year() const noexcept { return year_at(values_.size() - 1); }

private:
    std::vector<double> values_;
    int start_year_;
    std::string label_;
};

/// Result of applying first-differencing `order_applied` times. Keeps the
/// dropped leading values so integrate() can reconstruct the original
/// series.
struct DifferencedSeries {
    TimeSeries series;
    int order_applied = 0;
    std::vector<double> initial_values;  // one per differencing pass, oldest first
};

/// Arithmetic mean.
double sample_mean(const TimeSeries& ts);

/// Mean squared deviation about the mean (divide-by-n variance).
double sample_variance(const TimeSeries& ts);

/// Apply first-differencing d times (d = 0 is the identity). The result's
/// start year advances by d. Throws DegenerateInput when d >= length or
/// d < 0.
DifferencedSeries difference(const TimeSeries& ts, int d);

/// Exact inverse of difference(); round-trips the original series.
TimeSeries integrate(const DifferencedSeries& ds);

/// Sample autocorrelations at lags 0..max_lag using the biased
/// (divide-by-n, mean-corrected) estimator; element 0 is exactly 1.
/// Throws DegenerateInput for zero-variance input or max_lag >= length.
std::vector<double> acf(const TimeSeries& ts, int max_lag,
                        Execution exec = Execution::parallel);

/// Partial autocorrelations at lags 1..max_lag via the Durbin-Levinson
/// recursion. Preconditions as acf().
std::vector<double> pacf(const TimeSeries& ts, int max_lag,
                         Execution exec = Execution::parallel);

namespace kernels {

/// lagged_products(x, L)[k] = sum over t in [k, n) of x[t] * x[t-k], for
/// k = 0..L. The shared inner kernel behind acf() and the long-run variance
/// estimate. Parallelism is across lags; each lag's sum is accumulated in
/// index order, so the two policies agree bitwise.
std::vector<double> lagged_products(std::span<const double> x, int max_lag,
                                    Execution exec = Execution::parallel);

}  // namespace kernels

}  // namespace tsa
