#include "tsa/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "tsa/errors.hpp"
#include "tsa/special.hpp"

namespace tsa {

int ljung_box_default_lags(std::size_t n) {
    return std::max(1, std::min(10, static_cast<int>(n / 5)));
}

TestResult ljung_box(const TimeSeries& residuals, int lags, int fitdf, Execution exec) {
    const int n = static_cast<int>(residuals.size());
    if (lags < 1 || lags >= n) {
        throw DegenerateInput("ljung_box requires 0 < lags < n");
    }
    if (fitdf < 0 || fitdf >= lags) {
        throw DegenerateInput("ljung_box requires 0 <= fitdf < lags");
    }

    const std::vector<double> rho = acf(residuals, lags, exec);
    double q = 0.0;
    for (int k = 1; k <= lags; ++k) {
        q += rho[static_cast<std::size_t>(k)] * rho[static_cast<std::size_t>(k)] /
             static_cast<double>(n - k);
    }
    q *= n * (n + 2.0);

    const int df = lags - fitdf;
    return TestResult{q, chi_squared_upper_tail(df, q), df, Clip::none};
}

// ---------------------------------------------------------------------------
// Shapiro-Wilk, following Royston's approximation (as in algorithm AS R94):
// Blom normal scores with polynomial corrections to the two largest weights,
// W computed as the squared correlation between the ordered sample and the
// weights, and a log-normal / logistic-style transform of 1 - W to a normal
// deviate for the p-value.
// ---------------------------------------------------------------------------

std::vector<double> normal_scores(int n) {
    std::vector<double> m(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        m[static_cast<std::size_t>(i - 1)] = normal_quantile((i - 0.375) / (n + 0.25));
    }
    return m;
}

namespace {

double poly(const double* coeffs, int count, double x) {
    double value = coeffs[0];
    double power = 1.0;
    for (int i = 1; i < count; ++i) {
        power *= x;
        value += coeffs[i] * power;
    }
    return value;
}

}  // namespace

TestResult shapiro_wilk(const TimeSeries& x) {
    const int n = static_cast<int>(x.size());
    if (n < 3 || n > 5000) {
        throw UnsupportedSampleSize("shapiro_wilk supports 3 <= n <= 5000, got " +
                                    std::to_string(n));
    }
    std::vector<double> sorted = x.values();
    std::sort(sorted.begin(), sorted.end());
    if (sorted.back() - sorted.front() <= 0.0) {
        throw DegenerateInput("shapiro_wilk requires a non-constant sample");
    }

    // Weights for the lower half; the upper half is the negated mirror.
    const int half = n / 2;
    std::vector<double> weights(static_cast<std::size_t>(half));
    if (n == 3) {
        weights[0] = std::sqrt(0.5);
    } else {
        std::vector<double> m(static_cast<std::size_t>(half));
        double ssq_m = 0.0;
        for (int i = 1; i <= half; ++i) {
            m[static_cast<std::size_t>(i - 1)] = normal_quantile((i - 0.375) / (n + 0.25));
            ssq_m += m[static_cast<std::size_t>(i - 1)] * m[static_cast<std::size_t>(i - 1)];
        }
        ssq_m *= 2.0;  // mirror half
        const double root_ssq = std::sqrt(ssq_m);
        const double u = 1.0 / std::sqrt(static_cast<double>(n));

        static constexpr std::array<double, 6> c1{0.0, 0.221157, -0.147981, -2.071190, 4.434685,
                                                  -2.706056};
        static constexpr std::array<double, 6> c2{0.0, 0.042981, -0.293762, -1.752461, 5.682633,
                                                  -3.582633};
        // m[0] is the most negative score; the published corrections are for
        // the largest weight, hence the sign flips.
        const double a1 = poly(c1.data(), 6, u) - m[0] / root_ssq;
        int fixed = 1;
        double a2 = 0.0;
        double normalizer;
        if (n > 5) {
            fixed = 2;
            a2 = poly(c2.data(), 6, u) - m[1] / root_ssq;
            normalizer = std::sqrt((ssq_m - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                                   (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
            weights[1] = a2;
        } else {
            normalizer = std::sqrt((ssq_m - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
        }
        weights[0] = a1;
        for (int i = fixed; i < half; ++i) {
            weights[static_cast<std::size_t>(i)] = -m[static_cast<std::size_t>(i)] / normalizer;
        }
    }

    // W as a squared correlation, accumulated via the stable 1 - W form.
    auto weight_at = [&](int i) {
        const int j = n - 1 - i;
        if (i == j) return 0.0;
        return i < j ? -weights[static_cast<std::size_t>(i)] : weights[static_cast<std::size_t>(j)];
    };
    double mean_x = 0.0;
    for (double v : sorted) mean_x += v;
    mean_x /= n;

    double ssa = 0.0, ssx = 0.0, sax = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = weight_at(i);  // weights already sum to zero
        const double dx = sorted[static_cast<std::size_t>(i)] - mean_x;
        ssa += a * a;
        ssx += dx * dx;
        sax += a * dx;
    }
    const double ssassx = std::sqrt(ssa * ssx);
    const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    const double w = 1.0 - w1;

    double p;
    if (n == 3) {
        constexpr double six_over_pi = 1.90985931710274;
        constexpr double asin_sqrt_3_4 = 1.04719755119660;
        p = std::clamp(six_over_pi * (std::asin(std::sqrt(w)) - asin_sqrt_3_4), 0.0, 1.0);
    } else {
        double y = std::log(std::max(w1, 1e-99));
        double mean_w, sd_w;
        if (n <= 11) {
            static constexpr std::array<double, 2> g{-2.273, 0.459};
            static constexpr std::array<double, 4> c3{0.544, -0.39978, 0.025054, -6.714e-4};
            static constexpr std::array<double, 4> c4{1.3822, -0.77857, 0.062767, -0.0020322};
            const double gamma = poly(g.data(), 2, static_cast<double>(n));
            if (y >= gamma) {
                return TestResult{w, 0.0, n, Clip::none};
            }
            y = -std::log(gamma - y);
            mean_w = poly(c3.data(), 4, static_cast<double>(n));
            sd_w = std::exp(poly(c4.data(), 4, static_cast<double>(n)));
        } else {
            static constexpr std::array<double, 4> c5{-1.5861, -0.31082, -0.083751, 0.0038915};
            static constexpr std::array<double, 3> c6{-0.4803, -0.082676, 0.0030302};
            const double log_n = std::log(static_cast<double>(n));
            mean_w = poly(c5.data(), 4, log_n);
            sd_w = std::exp(poly(c6.data(), 3, log_n));
        }
        p = 1.0 - normal_cdf((y - mean_w) / sd_w);
    }
    return TestResult{w, p, n, Clip::none};
}

// ---------------------------------------------------------------------------
// KPSS
// ---------------------------------------------------------------------------

namespace {

// Level-stationarity critical values (upper-tail probabilities 10%..1%).
constexpr std::array<double, 4> kKpssProbs{0.10, 0.05, 0.025, 0.01};
constexpr std::array<double, 4> kKpssCrit{0.347, 0.463, 0.574, 0.739};

}  // namespace

double kpss_critical_value(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DegenerateInput("kpss level must be in (0, 1)");
    }
    if (alpha >= kKpssProbs.front()) return kKpssCrit.front();
    if (alpha <= kKpssProbs.back()) return kKpssCrit.back();
    for (std::size_t i = 1; i < kKpssProbs.size(); ++i) {
        if (alpha >= kKpssProbs[i]) {
            const double t = (alpha - kKpssProbs[i]) / (kKpssProbs[i - 1] - kKpssProbs[i]);
            return kKpssCrit[i] + t * (kKpssCrit[i - 1] - kKpssCrit[i]);
        }
    }
    return kKpssCrit.back();
}

TestResult kpss(const TimeSeries& x, std::optional<int> bandwidth, Execution exec) {
    const int n = static_cast<int>(x.size());
    if (n < 10) throw DegenerateInput("kpss requires at least 10 observations");

    const double mean = sample_mean(x);
    std::vector<double> e(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) e[static_cast<std::size_t>(t)] = x[static_cast<std::size_t>(t)] - mean;

    double cumulative = 0.0;
    double ss_partial = 0.0;
    for (double v : e) {
        cumulative += v;
        ss_partial += cumulative * cumulative;
    }

    const int lag = bandwidth.value_or(
        static_cast<int>(std::floor(4.0 * std::pow(n / 100.0, 0.25))));
    if (lag < 0 || lag >= n) throw DegenerateInput("kpss bandwidth must be in [0, n)");

    const std::vector<double> sums = kernels::lagged_products(e, lag, exec);
    if (sums[0] <= 0.0) throw DegenerateInput("kpss requires a non-constant series");
    double long_run = sums[0];
    for (int s = 1; s <= lag; ++s) {
        const double weight = 1.0 - static_cast<double>(s) / (lag + 1.0);
        long_run += 2.0 * weight * sums[static_cast<std::size_t>(s)];
    }
    long_run /= n;
    if (!(long_run > 0.0)) throw DegenerateInput("kpss long-run variance is not positive");

    const double eta = ss_partial / (static_cast<double>(n) * n * long_run);

    // Interpolate the upper-tail probability; clamp outside the table.
    double p;
    Clip clip = Clip::none;
    if (eta <= kKpssCrit.front()) {
        p = kKpssProbs.front();
        clip = Clip::at_upper;
    } else if (eta >= kKpssCrit.back()) {
        p = kKpssProbs.back();
        clip = Clip::at_lower;
    } else {
        p = kKpssProbs.back();
        for (std::size_t i = 1; i < kKpssCrit.size(); ++i) {
            if (eta < kKpssCrit[i]) {
                const double t = (eta - kKpssCrit[i - 1]) / (kKpssCrit[i] - kKpssCrit[i - 1]);
                p = kKpssProbs[i - 1] + t * (kKpssProbs[i] - kKpssProbs[i - 1]);
                break;
            }
        }
    }
    return TestResult{eta, p, n, clip};
}

}  // namespace tsa
