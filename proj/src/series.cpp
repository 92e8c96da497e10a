#include "tsa/series.hpp"

#include <cmath>
#include <utility>

#include "tsa/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tsa {

bool openmp_enabled() noexcept {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

int max_threads() noexcept {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

TimeSeries::TimeSeries(std::vector<double> values, int start_year, std::string label)
    : values_(std::move(values)), start_year_(start_year), label_(std::move(label)) {
    if (values_.empty()) {
        throw DegenerateInput("time series must contain at least one observation");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DegenerateInput("non-finite value at year " +
                                  std::to_string(start_year_ + static_cast<int>(i)));
        }
    }
}

double sample_mean(const TimeSeries& ts) {
    double sum = 0.0;
    for (double v : ts.values()) sum += v;
    return sum / static_cast<double>(ts.size());
}

double sample_variance(const TimeSeries& ts) {
    const double m = sample_mean(ts);
    double ss = 0.0;
    for (double v : ts.values()) ss += (v - m) * (v - m);
    return ss / static_cast<double>(ts.size());
}

DifferencedSeries difference(const TimeSeries& ts, int d) {
    if (d < 0) throw DegenerateInput("differencing order must be non-negative");
    if (static_cast<std::size_t>(d) >= ts.size()) {
        throw DegenerateInput("differencing order " + std::to_string(d) +
                              " >= series length " + std::to_string(ts.size()));
    }
    std::vector<double> work = ts.values();
    std::vector<double> initial;
    initial.reserve(static_cast<std::size_t>(d));
    for (int pass = 0; pass < d; ++pass) {
        initial.push_back(work.front());
        for (std::size_t t = 0; t + 1 < work.size(); ++t) work[t] = work[t + 1] - work[t];
        work.pop_back();
    }
    return DifferencedSeries{TimeSeries(std::move(work), ts.start_year() + d, ts.label()), d,
                             std::move(initial)};
}

TimeSeries integrate(const DifferencedSeries& ds) {
    std::vector<double> work = ds.series.values();
    for (int pass = ds.order_applied - 1; pass >= 0; --pass) {
        std::vector<double> undone(work.size() + 1);
        undone[0] = ds.initial_values[static_cast<std::size_t>(pass)];
        for (std::size_t t = 0; t < work.size(); ++t) undone[t + 1] = undone[t] + work[t];
        work = std::move(undone);
    }
    return TimeSeries(std::move(work), ds.series.start_year() - ds.order_applied,
                      ds.series.label());
}

namespace kernels {

std::vector<double> lagged_products(std::span<const double> x, int max_lag, Execution exec) {
    const int n = static_cast<int>(x.size());
    std::vector<double> out(static_cast<std::size_t>(max_lag) + 1, 0.0);

    // Each lag's sum runs over t in increasing order regardless of policy;
    // threads own whole lags, so results do not depend on the thread count.
#ifdef _OPENMP
    const bool parallel = exec == Execution::parallel &&
                          static_cast<long long>(n) * (max_lag + 1) >= (1LL << 16);
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int k = 0; k <= max_lag; ++k) {
        double sum = 0.0;
        for (int t = k; t < n; ++t) sum += x[static_cast<std::size_t>(t)] *
                                           x[static_cast<std::size_t>(t - k)];
        out[static_cast<std::size_t>(k)] = sum;
    }
    (void)exec;
    return out;
}

}  // namespace kernels

std::vector<double> acf(const TimeSeries& ts, int max_lag, Execution exec) {
    if (max_lag < 0) throw DegenerateInput("max_lag must be non-negative");
    if (static_cast<std::size_t>(max_lag) >= ts.size()) {
        throw DegenerateInput("max_lag " + std::to_string(max_lag) + " >= series length " +
                              std::to_string(ts.size()));
    }
    const double m = sample_mean(ts);
    std::vector<double> centered(ts.size());
    for (std::size_t t = 0; t < ts.size(); ++t) centered[t] = ts[t] - m;

    std::vector<double> sums = kernels::lagged_products(centered, max_lag, exec);
    if (sums[0] <= 0.0) throw DegenerateInput("zero-variance series has no autocorrelation");

    std::vector<double> rho(sums.size());
    rho[0] = 1.0;
    for (std::size_t k = 1; k < sums.size(); ++k) rho[k] = sums[k] / sums[0];
    return rho;
}

std::vector<double> pacf(const TimeSeries& ts, int max_lag, Execution exec) {
    if (max_lag < 1) throw DegenerateInput("pacf requires max_lag >= 1");
    const std::vector<double> rho = acf(ts, max_lag, exec);

    // Durbin-Levinson: phi[k][k] is the partial autocorrelation at lag k.
    std::vector<double> out(static_cast<std::size_t>(max_lag));
    std::vector<double> prev(static_cast<std::size_t>(max_lag) + 1, 0.0);
    std::vector<double> cur(prev.size(), 0.0);
    double variance = 1.0;
    for (int k = 1; k <= max_lag; ++k) {
        double num = rho[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j) num -= prev[static_cast<std::size_t>(j)] *
                                           rho[static_cast<std::size_t>(k - j)];
        const double phi_kk = num / variance;
        cur[static_cast<std::size_t>(k)] = phi_kk;
        for (int j = 1; j < k; ++j) {
            cur[static_cast<std::size_t>(j)] =
                prev[static_cast<std::size_t>(j)] - phi_kk * prev[static_cast<std::size_t>(k - j)];
        }
        variance *= 1.0 - phi_kk * phi_kk;
        out[static_cast<std::size_t>(k - 1)] = phi_kk;
        std::swap(prev, cur);
    }
    return out;
}

}  // namespace tsa
