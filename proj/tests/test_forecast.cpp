#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tsa/errors.hpp"
#include "tsa/forecast.hpp"
#include "tsa/special.hpp"

using tsa::ArimaParams;
using tsa::FittedModel;
using tsa::ModelOrder;
using tsa::TimeSeries;

namespace {

// Hand-assembled models: forecast() only reads the order, coefficients, and
// innovation variance.
FittedModel make_model(ModelOrder order, std::vector<double> phi, std::vector<double> theta,
                       std::optional<double> mu, double sigma2) {
    ArimaParams params;
    params.phi = std::move(phi);
    params.theta = std::move(theta);
    params.mu = mu;
    params.sigma2 = sigma2;
    return FittedModel{order, std::move(params), 0.0, 0.0, 0.0, 0.0,
                       TimeSeries({0.0}, 0), 1, true};
}

}  // namespace

TEST_CASE("psi weights of pure AR and MA models") {
    const std::vector<double> ar = tsa::psi_weights(std::vector<double>{0.6}, {}, 8);
    for (int j = 0; j < 8; ++j) {
        CHECK(std::fabs(ar[static_cast<std::size_t>(j)] - std::pow(0.6, j)) < 1e-12);
    }
    const std::vector<double> ma = tsa::psi_weights({}, std::vector<double>{0.4}, 6);
    CHECK(ma[0] == 1.0);
    CHECK(ma[1] == 0.4);
    for (int j = 2; j < 6; ++j) CHECK(ma[static_cast<std::size_t>(j)] == 0.0);
}

TEST_CASE("psi weights of an ARMA(1,1)") {
    const std::vector<double> psi =
        tsa::psi_weights(std::vector<double>{0.5}, std::vector<double>{0.3}, 4);
    CHECK(psi[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(psi[1] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(psi[2] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(psi[3] == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("integrated AR polynomial composes the differencing operator") {
    const std::vector<double> pure_i = tsa::integrated_ar_polynomial({}, 1);
    REQUIRE(pure_i.size() == 1);
    CHECK(pure_i[0] == doctest::Approx(1.0));

    // (1 - 0.5z)(1 - z) = 1 - 1.5z + 0.5z^2.
    const std::vector<double> ari = tsa::integrated_ar_polynomial(std::vector<double>{0.5}, 1);
    REQUIRE(ari.size() == 2);
    CHECK(ari[0] == doctest::Approx(1.5));
    CHECK(ari[1] == doctest::Approx(-0.5));
}

TEST_CASE("AR(1) point forecasts decay geometrically to the mean") {
    const FittedModel model =
        make_model(ModelOrder{1, 0, 0, true}, {0.6}, {}, 100.0, 1.0);
    const TimeSeries history({90.0, 130.0, 200.0}, 2000);
    const std::vector<double> levels{0.95};
    const tsa::ForecastResult fc = tsa::forecast(model, history, 12, levels);

    CHECK(fc.origin_year == 2002);
    CHECK(fc.point[0] == doctest::Approx(160.0).epsilon(1e-12));
    CHECK(fc.point[1] == doctest::Approx(136.0).epsilon(1e-12));
    CHECK(fc.point[2] == doctest::Approx(121.6).epsilon(1e-12));
    for (int m = 0; m < 12; ++m) {
        CHECK(std::fabs(fc.point[static_cast<std::size_t>(m)] - 100.0) ==
              doctest::Approx(100.0 * std::pow(0.6, m + 1)).epsilon(1e-10));
    }
}

TEST_CASE("white-noise model forecasts the mean with constant bands") {
    const FittedModel model = make_model(ModelOrder{0, 0, 0, true}, {}, {}, 42.0, 4.0);
    const TimeSeries history({40.0, 44.0, 41.0, 43.0}, 1990);
    const std::vector<double> levels{0.80, 0.95};
    const tsa::ForecastResult fc = tsa::forecast(model, history, 6, levels);
    const double z95 = tsa::normal_quantile(0.975);
    for (int m = 0; m < 6; ++m) {
        CHECK(fc.point[static_cast<std::size_t>(m)] == doctest::Approx(42.0));
        const auto& band95 = fc.intervals[1];
        CHECK(band95.upper[static_cast<std::size_t>(m)] - band95.lower[static_cast<std::size_t>(m)] ==
              doctest::Approx(2.0 * z95 * 2.0).epsilon(1e-12));
    }
}

TEST_CASE("two-step standard error matches the psi-weight closed form") {
    const FittedModel model = make_model(ModelOrder{1, 0, 0, false}, {0.6}, {}, std::nullopt, 1.0);
    const TimeSeries history(oracle::gaussian(50, 31, 0.0, 1.0), 1950);
    const std::vector<double> levels{0.95};
    const tsa::ForecastResult fc = tsa::forecast(model, history, 2, levels);
    const double half_width =
        fc.intervals[0].upper[1] - fc.point[1];
    CHECK(half_width == doctest::Approx(1.959963984540054 * std::sqrt(1.36)).epsilon(1e-10));
    CHECK(half_width == doctest::Approx(2.2857).epsilon(1e-4));
}

TEST_CASE("variance accumulates monotonically and converges to the process variance") {
    const FittedModel model = make_model(ModelOrder{1, 0, 0, false}, {0.6}, {}, std::nullopt, 1.0);
    const std::vector<double> psi = tsa::psi_weights(model, 200);
    double acc = 0.0;
    double prev = 0.0;
    for (double w : psi) {
        acc += w * w;
        CHECK(acc >= prev);
        prev = acc;
    }
    CHECK(acc == doctest::Approx(1.0 / (1.0 - 0.36)).epsilon(0.01));
}

TEST_CASE("interval bands are symmetric and nested") {
    ArimaParams gen;
    gen.phi = {0.7};
    gen.mu = 30.0;
    gen.sigma2 = 2.0;
    const TimeSeries history = tsa::simulate(ModelOrder{1, 0, 0, true}, gen, 80, 5, 1940);
    const FittedModel model = tsa::fit(history, ModelOrder{1, 0, 0, true});
    const std::vector<double> levels{0.95, 0.80};  // intentionally unsorted
    const tsa::ForecastResult fc = tsa::forecast(model, history, 10, levels);

    REQUIRE(fc.intervals.size() == 2);
    CHECK(fc.intervals[0].level == 0.80);
    CHECK(fc.intervals[1].level == 0.95);
    for (int m = 0; m < fc.horizon; ++m) {
        const std::size_t i = static_cast<std::size_t>(m);
        CHECK(fc.intervals[0].upper[i] - fc.point[i] ==
              doctest::Approx(fc.point[i] - fc.intervals[0].lower[i]).epsilon(1e-12));
        CHECK(fc.intervals[0].lower[i] >= fc.intervals[1].lower[i]);
        CHECK(fc.intervals[0].upper[i] <= fc.intervals[1].upper[i]);
        CHECK(fc.intervals[0].lower[i] <= fc.point[i]);
        CHECK(fc.point[i] <= fc.intervals[0].upper[i]);
    }
    // Width grows with horizon for a stationary model.
    for (int m = 1; m < fc.horizon; ++m) {
        const std::size_t i = static_cast<std::size_t>(m);
        CHECK(fc.intervals[1].upper[i] - fc.intervals[1].lower[i] >=
              fc.intervals[1].upper[i - 1] - fc.intervals[1].lower[i - 1]);
    }
}

TEST_CASE("d=1 forecasts back-integrate consistently") {
    ArimaParams gen;
    gen.phi = {0.5};
    gen.sigma2 = 1.0;
    const TimeSeries history = tsa::simulate(ModelOrder{1, 1, 0, false}, gen, 60, 77, 1960);
    const FittedModel model = tsa::fit(history, ModelOrder{1, 1, 0, false});

    const std::vector<double> levels{0.95};
    const int h = 8;
    const tsa::ForecastResult fc = tsa::forecast(model, history, h, levels);
    const std::vector<double> diffed = tsa::forecast_differenced(model, history, h);

    // The integrated path is exactly the running sum of the differenced
    // forecasts started at the last observation.
    double level_value = history[history.size() - 1];
    for (int m = 0; m < h; ++m) {
        level_value = level_value + diffed[static_cast<std::size_t>(m)];
        CHECK(fc.point[static_cast<std::size_t>(m)] == level_value);
    }

    // And differencing the point path recovers the differenced forecasts.
    double prev = history[history.size() - 1];
    for (int m = 0; m < h; ++m) {
        const double delta = fc.point[static_cast<std::size_t>(m)] - prev;
        CHECK(delta == doctest::Approx(diffed[static_cast<std::size_t>(m)]).epsilon(1e-12));
        prev = fc.point[static_cast<std::size_t>(m)];
    }

    // Variance uses the integrated polynomial, so bands widen faster than
    // any stationary model's.
    const std::vector<double> psi = tsa::psi_weights(model, 5);
    const std::vector<double> phi_star =
        tsa::integrated_ar_polynomial(model.params.phi, 1);
    const std::vector<double> expected = tsa::psi_weights(phi_star, model.params.theta, 5);
    for (std::size_t j = 0; j < 5; ++j) CHECK(psi[j] == expected[j]);
}

TEST_CASE("forecast input validation") {
    const FittedModel model = make_model(ModelOrder{0, 0, 0, true}, {}, {}, 1.0, 1.0);
    const TimeSeries history({1.0, 2.0}, 2000);
    CHECK_THROWS_AS(tsa::forecast(model, history, 0, std::vector<double>{0.9}),
                    tsa::DegenerateInput);
    CHECK_THROWS_AS(tsa::forecast(model, history, 3, std::vector<double>{}),
                    tsa::DegenerateInput);
    CHECK_THROWS_AS(tsa::forecast(model, history, 3, std::vector<double>{1.0}),
                    tsa::DegenerateInput);
    CHECK_THROWS_AS(tsa::psi_weights(std::vector<double>{0.5}, {}, 0), tsa::DegenerateInput);
}
