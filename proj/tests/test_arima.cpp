#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tsa/arima.hpp"
#include "tsa/errors.hpp"
#include "tsa/series.hpp"

using tsa::ArimaParams;
using tsa::ModelOrder;
using tsa::TimeSeries;

namespace {

double iid_normal_loglik(const std::vector<double>& x, double mu, double sigma2) {
    const double two_pi = 6.283185307179586476925286766559;
    double loglik = 0.0;
    for (double v : x) {
        loglik += -0.5 * std::log(two_pi * sigma2) - (v - mu) * (v - mu) / (2.0 * sigma2);
    }
    return loglik;
}

}  // namespace

TEST_CASE("order validation") {
    const ModelOrder negative{-1, 0, 0, false};
    const ModelOrder deep_d{0, 5, 0, false};
    const ModelOrder mean_with_d{1, 1, 0, true};
    const ModelOrder ok{2, 1, 1, false};
    CHECK_THROWS_AS(negative.validate(), tsa::DegenerateInput);
    CHECK_THROWS_AS(deep_d.validate(), tsa::DegenerateInput);
    CHECK_THROWS_AS(mean_with_d.validate(), tsa::DegenerateInput);
    CHECK_NOTHROW(ok.validate());
    const ModelOrder ar1_mean{1, 0, 0, true};
    const ModelOrder arma21{2, 0, 1, false};
    CHECK(ar1_mean.parameter_count() == 3);
    CHECK(arma21.parameter_count() == 4);
}

TEST_CASE("intercept follows the mean-adjusted form") {
    ArimaParams one;
    one.phi = {0.5};
    one.mu = 10.0;
    CHECK(tsa::intercept(one) == doctest::Approx(5.0));

    ArimaParams zero_mean;
    zero_mean.phi = {0.3, -0.4};
    zero_mean.mu = 0.0;
    CHECK(tsa::intercept(zero_mean) == doctest::Approx(0.0));

    ArimaParams two;
    two.phi = {0.3, 0.2};
    two.mu = 100.0;
    CHECK(tsa::intercept(two) == doctest::Approx(50.0));

    ArimaParams no_mean;
    no_mean.phi = {0.5};
    CHECK_THROWS_AS(tsa::intercept(no_mean), tsa::MissingMean);
}

TEST_CASE("pacf transform round-trips and detects unit roots") {
    const std::vector<double> partials{0.6, -0.4, 0.2};
    const std::vector<double> phi = tsa::pacf_to_ar(partials);
    CHECK(tsa::is_stationary(phi));
    const std::vector<double> back = tsa::ar_to_pacf(phi);
    for (std::size_t i = 0; i < partials.size(); ++i) {
        CHECK(back[i] == doctest::Approx(partials[i]).epsilon(1e-12));
    }

    CHECK(tsa::is_stationary(std::vector<double>{0.99}));
    CHECK_FALSE(tsa::is_stationary(std::vector<double>{1.0}));
    CHECK_FALSE(tsa::is_stationary(std::vector<double>{0.5, 0.6}));
    CHECK(tsa::is_invertible(std::vector<double>{0.8}));
    CHECK_FALSE(tsa::is_invertible(std::vector<double>{-1.0}));
}

TEST_CASE("log-likelihood of a pure-noise model reduces to the iid form") {
    const std::vector<double> x = oracle::gaussian(40, 11, 5.0, 2.0);
    ArimaParams params;
    params.mu = 4.7;
    params.sigma2 = 3.9;
    const double got = tsa::log_likelihood(TimeSeries(x, 0), ModelOrder{0, 0, 0, true}, params);
    CHECK(got == doctest::Approx(iid_normal_loglik(x, 4.7, 3.9)).epsilon(1e-12));
}

TEST_CASE("state-space likelihood matches the closed-form AR(1) likelihood") {
    std::mt19937_64 seeds(101);
    for (int rep = 0; rep < 50; ++rep) {
        const std::uint64_t seed = seeds();
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> phi_dist(-0.95, 0.95);
        std::uniform_real_distribution<double> mu_dist(-20.0, 20.0);
        std::uniform_real_distribution<double> s2_dist(0.25, 9.0);
        std::uniform_int_distribution<int> n_dist(20, 200);
        const double phi = phi_dist(rng);
        const double mu = mu_dist(rng);
        const double sigma2 = s2_dist(rng);
        const int n = n_dist(rng);

        ArimaParams gen;
        gen.phi = {phi};
        gen.mu = mu;
        gen.sigma2 = sigma2;
        const TimeSeries ts =
            tsa::simulate(ModelOrder{1, 0, 0, true}, gen, n, seed ^ 0xabcdef);

        const double kalman = tsa::log_likelihood(ts, ModelOrder{1, 0, 0, true}, gen);
        const double closed = oracle::ar1_loglik(ts.values(), phi, mu, sigma2);
        CHECK(kalman == doctest::Approx(closed).epsilon(1e-8));
    }
}

TEST_CASE("state-space likelihood matches a dense-covariance oracle for ARMA(1,1)") {
    std::mt19937_64 seeds(202);
    for (int rep = 0; rep < 20; ++rep) {
        const std::uint64_t seed = seeds();
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> phi_dist(-0.9, 0.9);
        std::uniform_real_distribution<double> theta_dist(-0.9, 0.9);
        std::uniform_real_distribution<double> mu_dist(-5.0, 5.0);
        std::uniform_real_distribution<double> s2_dist(0.5, 4.0);
        const double phi = phi_dist(rng);
        const double theta = theta_dist(rng);
        const double mu = mu_dist(rng);
        const double sigma2 = s2_dist(rng);

        ArimaParams gen;
        gen.phi = {phi};
        gen.theta = {theta};
        gen.mu = mu;
        gen.sigma2 = sigma2;
        const TimeSeries ts = tsa::simulate(ModelOrder{1, 0, 1, true}, gen, 10, seed ^ 0x5a5a);

        const double kalman = tsa::log_likelihood(ts, ModelOrder{1, 0, 1, true}, gen);
        const double dense = oracle::arma11_dense_loglik(ts.values(), phi, theta, mu, sigma2);
        CHECK(kalman == doctest::Approx(dense).epsilon(1e-6));
    }
}

TEST_CASE("log-likelihood rejects inadmissible parameters") {
    const TimeSeries ts(oracle::gaussian(30, 3, 0.0, 1.0), 0);
    ArimaParams bad;
    bad.phi = {1.01};
    bad.sigma2 = 1.0;
    CHECK_THROWS_AS(tsa::log_likelihood(ts, ModelOrder{1, 0, 0, false}, bad),
                    tsa::NonStationaryParams);
    ArimaParams bad_sigma;
    bad_sigma.sigma2 = 0.0;
    CHECK_THROWS_AS(tsa::log_likelihood(ts, ModelOrder{0, 0, 0, false}, bad_sigma),
                    tsa::DegenerateInput);
}

TEST_CASE("fitting a mean-only model recovers the analytic optimum") {
    const std::vector<double> x = oracle::gaussian(60, 17, 120.0, 25.0);
    const TimeSeries ts(x, 1990, "noise");
    const tsa::FittedModel model = tsa::fit(ts, ModelOrder{0, 0, 0, true});

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double msd = 0.0;
    for (double v : x) msd += (v - mean) * (v - mean);
    msd /= static_cast<double>(x.size());

    CHECK(*model.params.mu == doctest::Approx(mean).epsilon(1e-7));
    CHECK(model.params.sigma2 == doctest::Approx(msd).epsilon(1e-6));
    CHECK(model.loglik == doctest::Approx(iid_normal_loglik(x, mean, msd)).epsilon(1e-9));
    CHECK(model.nobs == 60);
    CHECK(model.converged);
    CHECK(model.aicc == doctest::Approx(model.aic + 2.0 * 2.0 * 3.0 / (60 - 2 - 1)));
}

TEST_CASE("fitting a simulated AR(1) recovers the generating coefficient") {
    ArimaParams gen;
    gen.phi = {0.7};
    gen.mu = 50.0;
    gen.sigma2 = 4.0;
    const TimeSeries ts = tsa::simulate(ModelOrder{1, 0, 0, true}, gen, 500, 424242, 1500);

    const tsa::FittedModel model = tsa::fit(ts, ModelOrder{1, 0, 0, true});
    CHECK(std::fabs(model.params.phi[0] - 0.7) < 0.08);
    CHECK(std::fabs(*model.params.mu - 50.0) < 2.0);
    CHECK(std::fabs(model.params.sigma2 - 4.0) < 1.0);

    // Cross-check against the conditional-least-squares slope.
    double mean = tsa::sample_mean(ts);
    double num = 0.0, den = 0.0;
    for (std::size_t t = 1; t < ts.size(); ++t) {
        num += (ts[t] - mean) * (ts[t - 1] - mean);
        den += (ts[t - 1] - mean) * (ts[t - 1] - mean);
    }
    CHECK(std::fabs(model.params.phi[0] - num / den) < 0.05);
}

TEST_CASE("fitted likelihood dominates random admissible parameter vectors") {
    ArimaParams gen;
    gen.phi = {0.6};
    gen.theta = {0.3};
    gen.mu = 10.0;
    gen.sigma2 = 1.0;
    const ModelOrder order{1, 0, 1, true};
    const TimeSeries ts = tsa::simulate(order, gen, 120, 909, 1900);
    const tsa::FittedModel model = tsa::fit(ts, order);

    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> partial(-0.98, 0.98);
    std::uniform_real_distribution<double> mu_dist(0.0, 20.0);
    for (int rep = 0; rep < 100; ++rep) {
        const std::vector<double> phi = tsa::pacf_to_ar(std::vector<double>{partial(rng)});
        const std::vector<double> ma_base = tsa::pacf_to_ar(std::vector<double>{partial(rng)});
        const std::vector<double> theta{-ma_base[0]};
        const tsa::ProfiledLikelihood profiled =
            tsa::profile_log_likelihood(ts, order, phi, theta, mu_dist(rng));
        CHECK(model.loglik >= profiled.loglik - 1e-7);
    }
}

TEST_CASE("fit is invariant to label and start year") {
    const std::vector<double> x = oracle::gaussian(80, 55, 30.0, 6.0);
    const tsa::FittedModel a = tsa::fit(TimeSeries(x, 1900, "a"), ModelOrder{1, 0, 0, true});
    const tsa::FittedModel b = tsa::fit(TimeSeries(x, 2050, "b"), ModelOrder{1, 0, 0, true});
    CHECK(a.params.phi[0] == b.params.phi[0]);
    CHECK(*a.params.mu == *b.params.mu);
    CHECK(a.loglik == b.loglik);
}

TEST_CASE("fit is affine-equivariant") {
    ArimaParams gen;
    gen.phi = {0.5};
    gen.mu = 8.0;
    gen.sigma2 = 2.0;
    const TimeSeries ts = tsa::simulate(ModelOrder{1, 0, 0, true}, gen, 200, 777, 1800);
    const double a = 3.0, b = 2.5;
    std::vector<double> mapped(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) mapped[i] = a + b * ts[i];

    const tsa::FittedModel base = tsa::fit(ts, ModelOrder{1, 0, 0, true});
    const tsa::FittedModel scaled =
        tsa::fit(TimeSeries(mapped, ts.start_year()), ModelOrder{1, 0, 0, true});

    CHECK(scaled.params.phi[0] == doctest::Approx(base.params.phi[0]).epsilon(1e-4));
    CHECK(*scaled.params.mu == doctest::Approx(a + b * *base.params.mu).epsilon(1e-4));
    CHECK(scaled.params.sigma2 == doctest::Approx(b * b * base.params.sigma2).epsilon(1e-4));
}

TEST_CASE("residuals align with the differenced series") {
    ArimaParams gen;
    gen.phi = {0.4};
    gen.sigma2 = 1.0;
    const TimeSeries ts = tsa::simulate(ModelOrder{1, 1, 0, false}, gen, 60, 8, 1960, "drifty");
    const tsa::FittedModel model = tsa::fit(ts, ModelOrder{1, 1, 0, false});
    CHECK(model.nobs == 59);
    CHECK(model.residuals.size() == 59);
    CHECK(model.residuals.start_year() == 1961);
}

TEST_CASE("fit rejects series that are too short for the parameter count") {
    const TimeSeries tiny(std::vector<double>{1, 2, 3, 4, 5}, 2000);
    CHECK_THROWS_AS(tsa::fit(tiny, ModelOrder{1, 0, 0, true}), tsa::DegenerateInput);
    CHECK_THROWS_AS(tsa::fit(TimeSeries(std::vector<double>(12, 3.0), 2000), ModelOrder{0, 0, 0, true}),
                    tsa::DegenerateInput);
}

TEST_CASE("simulation is deterministic and honors its moments") {
    ArimaParams wn;
    wn.phi = {0.0};
    wn.mu = 0.0;
    wn.sigma2 = 1.0;
    const TimeSeries a = tsa::simulate(ModelOrder{1, 0, 0, true}, wn, 4000, 99);
    const TimeSeries b = tsa::simulate(ModelOrder{1, 0, 0, true}, wn, 4000, 99);
    CHECK(a.values() == b.values());
    CHECK(std::fabs(tsa::sample_mean(a)) < 3.0 / std::sqrt(4000.0));

    ArimaParams persistent;
    persistent.phi = {0.9};
    persistent.sigma2 = 1.0;
    const TimeSeries c = tsa::simulate(ModelOrder{1, 0, 0, false}, persistent, 10000, 1234);
    const std::vector<double> rho = tsa::acf(c, 1);
    CHECK(std::fabs(rho[1] - 0.9) < 0.03);

    ArimaParams explosive;
    explosive.phi = {1.05};
    explosive.sigma2 = 1.0;
    CHECK_THROWS_AS(tsa::simulate(ModelOrder{1, 0, 0, false}, explosive, 10, 1),
                    tsa::NonStationaryParams);
}
