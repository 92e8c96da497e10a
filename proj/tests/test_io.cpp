#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tsa/errors.hpp"
#include "tsa/io.hpp"
#include "tsa/report.hpp"

using nlohmann::ordered_json;
using tsa::IngestSpec;
using tsa::TimeSeries;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = std::string("/tmp/tsa_test_") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

IngestSpec spec_for(const std::string& path) {
    IngestSpec spec;
    spec.path = path;
    return spec;
}

TimeSeries synthetic_fixture() {
    IngestSpec spec;
    spec.path = std::string(TSA_DATA_DIR) + "/synthetic_annual_deaths.csv";
    return tsa::ingest_csv(spec);
}

}  // namespace

TEST_CASE("ingest parses, filters, and sorts") {
    const std::string path = write_temp(
        "basic.csv", "Entity,Year,Value\nComoros,1992,30\nComoros,1990,10\nComoros,1991,20\n"
                     "Mayotte,1990,999\n");
    IngestSpec spec = spec_for(path);
    spec.entity_filter = "Comoros";
    const TimeSeries ts = tsa::ingest_csv(spec);
    CHECK(ts.values() == std::vector<double>{10, 20, 30});
    CHECK(ts.start_year() == 1990);
    CHECK(ts.label() == "Comoros");
}

TEST_CASE("ingest accepts quoted fields and index-based columns") {
    const std::string path = write_temp(
        "quoted.csv",
        "Entity,Code,Year,\"Deaths - Malaria\"\n\"Comoros, Union of\",COM,1990,12.5\n"
        "\"Comoros, Union of\",COM,1991,13\n");
    IngestSpec spec = spec_for(path);
    spec.entity_filter = "Comoros, Union of";
    spec.value_column = "3";  // index fallback
    spec.year_column = "Year";
    const TimeSeries ts = tsa::ingest_csv(spec);
    CHECK(ts.values() == std::vector<double>{12.5, 13});
}

TEST_CASE("ingest error taxonomy") {
    const std::string missing_year = write_temp(
        "gap.csv", "Entity,Year,Value\nA,1990,1\nA,1992,3\n");
    CHECK_THROWS_WITH_AS(tsa::ingest_csv(spec_for(missing_year)),
                         doctest::Contains("1991"), tsa::GapError);

    const std::string duplicate = write_temp(
        "dup.csv", "Entity,Year,Value\nA,1990,1\nA,1990,2\n");
    CHECK_THROWS_AS(tsa::ingest_csv(spec_for(duplicate)), tsa::GapError);

    const std::string bad_column = write_temp("col.csv", "Entity,Year,Value\nA,1990,1\n");
    IngestSpec bad_spec = spec_for(bad_column);
    bad_spec.value_column = "Deaths";
    CHECK_THROWS_AS(tsa::ingest_csv(bad_spec), tsa::SchemaError);

    const std::string bad_value = write_temp(
        "val.csv", "Entity,Year,Value\nA,1990,1\nA,1991,oops\n");
    CHECK_THROWS_WITH_AS(tsa::ingest_csv(spec_for(bad_value)), doctest::Contains("line 3"),
                         tsa::ParseError);

    CHECK_THROWS_AS(tsa::ingest_csv(spec_for("/nonexistent/nope.csv")), tsa::IoError);

    IngestSpec filtered = spec_for(bad_column);
    filtered.year_range = {{1995, 1999}};
    CHECK_THROWS_AS(tsa::ingest_csv(filtered), tsa::DegenerateInput);
}

TEST_CASE("ingest is order-independent") {
    const std::string sorted_path = write_temp(
        "sorted.csv", "Entity,Year,Value\nA,1990,1\nA,1991,2\nA,1992,3\n");
    const std::string shuffled_path = write_temp(
        "shuffled.csv", "Entity,Year,Value\nA,1992,3\nA,1990,1\nA,1991,2\n");
    const TimeSeries a = tsa::ingest_csv(spec_for(sorted_path));
    const TimeSeries b = tsa::ingest_csv(spec_for(shuffled_path));
    CHECK(a.values() == b.values());
    CHECK(a.start_year() == b.start_year());
}

TEST_CASE("ingest honors the year range") {
    const std::string path = write_temp(
        "range.csv",
        "Entity,Year,Value\nA,1989,9\nA,1990,1\nA,1991,2\nA,1992,3\nA,1993,4\n");
    IngestSpec spec = spec_for(path);
    spec.year_range = {{1990, 1992}};
    const TimeSeries ts = tsa::ingest_csv(spec);
    CHECK(ts.values() == std::vector<double>{1, 2, 3});
    CHECK(ts.start_year() == 1990);
}

TEST_CASE("pipeline report on the synthetic fixture") {
    tsa::PipelineConfig config;
    config.search.max_p = 2;
    config.search.max_q = 2;
    const tsa::AnalysisReport report = tsa::run_pipeline(synthetic_fixture(), config);

    CHECK(report.n == 30);
    CHECK(report.start_year == 1990);
    CHECK(report.end_year == 2019);
    CHECK(report.forecast.horizon == 11);
    CHECK(report.forecast.origin_year == 2019);
    REQUIRE(report.selection.stepwise.has_value());
    REQUIRE(report.selection.exhaustive.has_value());
    CHECK(report.selection.agreement.has_value());
    CHECK(report.diagnostics.ljung_box.has_value());
    CHECK(report.diagnostics.lb_lags == 6);
    CHECK(report.diagnostics.shapiro_wilk.has_value());
    CHECK(report.diagnostics.kpss.has_value());

    const std::string text = tsa::render_text(report);
    CHECK(text.find("Selection") != std::string::npos);
    CHECK(text.find("Ljung-Box") != std::string::npos);
    CHECK(text.find("Forecast (origin 2019)") != std::string::npos);
}

TEST_CASE("json report round-trips losslessly") {
    tsa::PipelineConfig config;
    config.search.max_p = 1;
    config.search.max_q = 1;
    const tsa::AnalysisReport report = tsa::run_pipeline(synthetic_fixture(), config);

    const ordered_json j = tsa::to_json(report);
    const tsa::AnalysisReport back = tsa::analysis_report_from_json(j);
    const ordered_json j2 = tsa::to_json(back);
    CHECK(j == j2);
    CHECK(j.dump() == j2.dump());

    // Numeric fidelity through a parse cycle of the serialized text.
    const ordered_json reparsed = ordered_json::parse(j.dump());
    CHECK(reparsed.at("selection").at("exhaustive").at("chosen").at("loglik").get<double>() ==
          report.selection.exhaustive->chosen.loglik);
    CHECK(reparsed == j);
}

TEST_CASE("pipeline is deterministic") {
    tsa::PipelineConfig config;
    config.search.max_p = 1;
    config.search.max_q = 1;
    const tsa::AnalysisReport a = tsa::run_pipeline(synthetic_fixture(), config);
    const tsa::AnalysisReport b = tsa::run_pipeline(synthetic_fixture(), config);
    CHECK(tsa::to_json(a).dump() == tsa::to_json(b).dump());
    CHECK(tsa::render_svg_document(a) == tsa::render_svg_document(b));
}

TEST_CASE("white-noise pipeline picks the null model with clean diagnostics") {
    tsa::PipelineConfig config;
    config.search.max_p = 2;
    config.search.max_q = 2;
    int clean = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        tsa::ArimaParams gen;
        gen.mu = 200.0;
        gen.sigma2 = 100.0;
        const TimeSeries wn =
            tsa::simulate(tsa::ModelOrder{0, 0, 0, true}, gen, 100, seed * 31 + 1, 1900, "wn");
        const tsa::AnalysisReport report = tsa::run_pipeline(wn, config);
        const bool null_order =
            report.model().order == tsa::ModelOrder{0, 0, 0, true};
        const bool diagnostics_clean = report.diagnostics.ljung_box->p_value > 0.05 &&
                                       report.diagnostics.shapiro_wilk->p_value > 0.05 &&
                                       report.diagnostics.kpss->p_value > 0.05;
        if (null_order && diagnostics_clean) ++clean;
    }
    CHECK(clean >= 16);
}

TEST_CASE("five-point series completes or fails cleanly") {
    const TimeSeries tiny({3.0, 4.5, 2.5, 5.0, 4.0}, 2015, "tiny");
    tsa::PipelineConfig config;
    try {
        const tsa::AnalysisReport report = tsa::run_pipeline(tiny, config);
        CHECK(report.model().order.p + report.model().order.q <= 1);
        CHECK(report.forecast.horizon == 11);
    } catch (const tsa::Error& e) {
        CHECK(std::string(e.category()) == "DegenerateInput");
    }
}

TEST_CASE("svg has nested bands and deterministic bytes") {
    tsa::PipelineConfig config;
    config.search.max_p = 1;
    config.search.max_q = 1;
    const tsa::AnalysisReport report = tsa::run_pipeline(synthetic_fixture(), config);
    const std::string svg = tsa::render_svg_document(report);

    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.rfind("</svg>\n") == svg.size() - 7);

    std::size_t bands = 0, pos = 0;
    while ((pos = svg.find("<polygon class=\"band", pos)) != std::string::npos) {
        ++bands;
        pos += 10;
    }
    CHECK(bands == 2);
    // Wider band drawn first so the narrower nests on top.
    CHECK(svg.find("band band-95") < svg.find("band band-80"));

    const std::string path = "/tmp/tsa_test_chart.svg";
    tsa::render_svg(report, path);
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    CHECK(buffer.str() == svg);

    CHECK_THROWS_AS(tsa::render_svg(report, "/nonexistent/dir/chart.svg"), tsa::IoError);
}

TEST_CASE("svg clips negative lower bounds and annotates the warning") {
    // A short noisy count series near zero forces the lower band negative.
    const TimeSeries low({4.0, 9.0, 2.0, 8.0, 3.0, 9.0, 2.0, 7.0, 4.0, 8.0, 1.0, 9.0}, 2000,
                         "low");
    tsa::PipelineConfig config;
    config.search.max_p = 1;
    config.search.max_q = 1;
    const tsa::AnalysisReport report = tsa::run_pipeline(low, config);

    bool negative_lower = false;
    for (const tsa::ForecastBand& band : report.forecast.intervals) {
        for (double v : band.lower) negative_lower |= v < 0.0;
    }
    REQUIRE(negative_lower);

    bool warned = false;
    for (const std::string& w : report.warnings) {
        warned |= w.find("below zero") != std::string::npos;
    }
    CHECK(warned);

    const std::string svg = tsa::render_svg_document(report);
    CHECK(svg.find("class=\"warning\"") != std::string::npos);
    CHECK(svg.find("clipped at the axis") != std::string::npos);
}
