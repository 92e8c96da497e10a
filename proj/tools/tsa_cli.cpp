// Command-line front end: fit, select, diagnose, forecast, report, simulate.
//
// Exit codes: 0 success, 2 schema/parse errors, 3 model errors, 4 I/O
// errors. Every failure prints a single machine-parsable line to stderr:
//   error: <Category>: <message>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsa/arima.hpp"
#include "tsa/diagnostics.hpp"
#include "tsa/errors.hpp"
#include "tsa/forecast.hpp"
#include "tsa/io.hpp"
#include "tsa/report.hpp"
#include "tsa/select.hpp"

namespace {

using nlohmann::ordered_json;

struct InputFlags {
    std::string path;
    std::string entity;
    std::string entity_column = "Entity";
    std::string year_column = "Year";
    std::string value_column = "Value";
    std::string years;
};

void add_input_flags(CLI::App* cmd, InputFlags& flags) {
    cmd->add_option("--input", flags.path, "CSV file to read")->required();
    cmd->add_option("--entity", flags.entity, "Entity (row filter) to select");
    cmd->add_option("--entity-column", flags.entity_column,
                    "Entity column name or zero-based index")
        ->capture_default_str();
    cmd->add_option("--year-column", flags.year_column, "Year column name or zero-based index")
        ->capture_default_str();
    cmd->add_option("--column,--value-column", flags.value_column,
                    "Value column name or zero-based index")
        ->capture_default_str();
    cmd->add_option("--years", flags.years, "Inclusive year range START:END");
}

tsa::IngestSpec to_spec(const InputFlags& flags) {
    tsa::IngestSpec spec;
    spec.path = flags.path;
    spec.entity_column = flags.entity_column;
    spec.year_column = flags.year_column;
    spec.value_column = flags.value_column;
    if (!flags.entity.empty()) spec.entity_filter = flags.entity;
    if (!flags.years.empty()) {
        const std::size_t colon = flags.years.find(':');
        if (colon == std::string::npos) {
            throw tsa::ParseError("--years expects START:END, got '" + flags.years + "'");
        }
        try {
            spec.year_range = {std::stoi(flags.years.substr(0, colon)),
                               std::stoi(flags.years.substr(colon + 1))};
        } catch (const std::exception&) {
            throw tsa::ParseError("--years expects integer START:END, got '" + flags.years + "'");
        }
    }
    return spec;
}

tsa::ModelOrder parse_order(const std::string& text, bool no_mean) {
    int p = 0, d = 0, q = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> p >> c1 >> d >> c2 >> q) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof()) {
        throw tsa::ParseError("--order expects p,d,q, got '" + text + "'");
    }
    tsa::ModelOrder order{p, d, q, !no_mean && d == 0};
    order.validate();
    return order;
}

std::string fmt(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4f", v);
    return buffer;
}

std::string order_name(const tsa::ModelOrder& order) {
    std::ostringstream out;
    out << "ARIMA(" << order.p << "," << order.d << "," << order.q << ")";
    if (order.include_mean) out << " with mean";
    return out.str();
}

void print_model_text(const tsa::FittedModel& model) {
    std::cout << "Model: " << order_name(model.order) << "\n";
    for (std::size_t i = 0; i < model.params.phi.size(); ++i) {
        std::cout << "  phi" << i + 1 << "   = " << fmt(model.params.phi[i]) << "\n";
    }
    for (std::size_t i = 0; i < model.params.theta.size(); ++i) {
        std::cout << "  theta" << i + 1 << " = " << fmt(model.params.theta[i]) << "\n";
    }
    if (model.params.mu.has_value()) {
        std::cout << "  mean   = " << fmt(*model.params.mu)
                  << "  intercept = " << fmt(tsa::intercept(model.params)) << "\n";
    }
    std::cout << "  sigma2 = " << fmt(model.params.sigma2) << "\n";
    std::cout << "  loglik = " << fmt(model.loglik) << "  AIC = " << fmt(model.aic)
              << "  AICc = " << fmt(model.aicc) << "  BIC = " << fmt(model.bic)
              << "  (nobs " << model.nobs << ")\n";
    if (!model.converged) std::cout << "  warning: optimizer did not converge\n";
}

void print_test_text(const std::string& name, const tsa::TestResult& result) {
    std::cout << "  " << name << ": statistic " << fmt(result.statistic) << ", p-value "
              << fmt(result.p_value);
    if (result.clipped == tsa::Clip::at_upper) std::cout << " [clipped at table upper end]";
    if (result.clipped == tsa::Clip::at_lower) std::cout << " [clipped at table lower end]";
    std::cout << "\n";
}

void emit(const ordered_json& j, bool as_json) {
    if (as_json) std::cout << j.dump(2) << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"ARIMA toolkit for annual series: exact-likelihood fitting, AICc order "
                 "selection, residual diagnostics, and interval forecasts"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "Output format: text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    // --- fit ---------------------------------------------------------------
    auto* fit_cmd = app.add_subcommand("fit", "Fit a fixed ARIMA order by exact ML");
    InputFlags fit_input;
    add_input_flags(fit_cmd, fit_input);
    std::string fit_order_text = "1,0,0";
    bool fit_no_mean = false;
    fit_cmd->add_option("--order", fit_order_text, "Model order p,d,q")->capture_default_str();
    fit_cmd->add_flag("--no-mean", fit_no_mean, "Exclude the mean term");

    // --- select ------------------------------------------------------------
    auto* select_cmd = app.add_subcommand("select", "Choose an order by AICc search");
    InputFlags select_input;
    add_input_flags(select_cmd, select_input);
    bool flag_stepwise = false, flag_exhaustive = false, flag_both = false;
    select_cmd->add_flag("--stepwise", flag_stepwise, "Stepwise neighborhood search only");
    select_cmd->add_flag("--exhaustive", flag_exhaustive, "Exhaustive grid search only");
    select_cmd->add_flag("--both", flag_both, "Run both and compare (default)");
    tsa::SearchConfig search_defaults;
    int max_p = search_defaults.max_p, max_q = search_defaults.max_q,
        max_d = search_defaults.max_d;
    double alpha = search_defaults.stationarity_alpha;
    select_cmd->add_option("--max-p", max_p, "Largest AR order")->capture_default_str();
    select_cmd->add_option("--max-q", max_q, "Largest MA order")->capture_default_str();
    select_cmd->add_option("--max-d", max_d, "Largest differencing order")->capture_default_str();
    select_cmd->add_option("--alpha", alpha, "KPSS level for choosing d")->capture_default_str();

    // --- diagnose ----------------------------------------------------------
    auto* diagnose_cmd =
        app.add_subcommand("diagnose", "Ljung-Box, Shapiro-Wilk, and KPSS tests");
    InputFlags diagnose_input;
    add_input_flags(diagnose_cmd, diagnose_input);
    std::optional<int> diag_lags, diag_fitdf;
    std::string diag_order_text;
    diagnose_cmd->add_option("--lags", diag_lags, "Ljung-Box lag count (default min(10, n/5))");
    diagnose_cmd->add_option("--fitdf", diag_fitdf,
                             "Ljung-Box fitted-parameter adjustment (default 0, or p+q with "
                             "--order)");
    diagnose_cmd->add_option("--order", diag_order_text,
                             "Fit this order first and diagnose its residuals");

    // --- forecast ----------------------------------------------------------
    auto* forecast_cmd = app.add_subcommand("forecast", "Point forecasts and intervals");
    InputFlags forecast_input;
    add_input_flags(forecast_cmd, forecast_input);
    int horizon = 11;
    std::vector<double> levels;
    std::string forecast_order_text;
    forecast_cmd->add_option("--horizon", horizon, "Steps ahead")->capture_default_str();
    forecast_cmd->add_option("--level", levels,
                             "Confidence level in (0,1); repeatable (default 0.80 and 0.95)");
    forecast_cmd->add_option("--order", forecast_order_text,
                             "Fixed order p,d,q (default: stepwise selection)");
    bool forecast_no_mean = false;
    forecast_cmd->add_flag("--no-mean", forecast_no_mean, "Exclude the mean term with --order");

    // --- report ------------------------------------------------------------
    auto* report_cmd =
        app.add_subcommand("report", "Full pipeline: select, fit, diagnose, forecast");
    InputFlags report_input;
    add_input_flags(report_cmd, report_input);
    int report_horizon = 11;
    std::vector<double> report_levels;
    std::string svg_path;
    std::optional<int> report_lags, report_fitdf;
    bool report_stepwise = false, report_exhaustive = false, report_both = false;
    std::string kpss_on = "residuals";
    int report_max_p = search_defaults.max_p, report_max_q = search_defaults.max_q,
        report_max_d = search_defaults.max_d;
    report_cmd->add_option("--horizon", report_horizon, "Steps ahead")->capture_default_str();
    report_cmd->add_option("--level", report_levels,
                           "Confidence level in (0,1); repeatable (default 0.80 and 0.95)");
    report_cmd->add_option("--svg", svg_path, "Write a fan chart to this path");
    report_cmd->add_option("--lags", report_lags, "Ljung-Box lag count");
    report_cmd->add_option("--fitdf", report_fitdf, "Ljung-Box fitted-parameter adjustment");
    report_cmd->add_flag("--stepwise", report_stepwise, "Stepwise search only");
    report_cmd->add_flag("--exhaustive", report_exhaustive, "Exhaustive search only");
    report_cmd->add_flag("--both", report_both, "Run both searches (default)");
    report_cmd->add_option("--kpss-on", kpss_on, "Run KPSS on 'residuals' or 'series'")
        ->check(CLI::IsMember({"residuals", "series"}))
        ->capture_default_str();
    report_cmd->add_option("--max-p", report_max_p, "Largest AR order")->capture_default_str();
    report_cmd->add_option("--max-q", report_max_q, "Largest MA order")->capture_default_str();
    report_cmd->add_option("--max-d", report_max_d, "Largest differencing order")
        ->capture_default_str();

    // --- simulate ----------------------------------------------------------
    auto* simulate_cmd =
        app.add_subcommand("simulate", "Generate a synthetic series as CSV on stdout");
    std::string sim_order_text = "1,0,0";
    std::vector<double> sim_phi, sim_theta;
    double sim_mu = 0.0, sim_sigma2 = 1.0;
    bool sim_no_mean = false;
    int sim_n = 30, sim_start_year = 1990;
    std::uint64_t sim_seed = 1;
    std::string sim_entity = "Synthetic";
    simulate_cmd->add_option("--order", sim_order_text, "Model order p,d,q")
        ->capture_default_str();
    simulate_cmd->add_option("--phi", sim_phi, "AR coefficients");
    simulate_cmd->add_option("--theta", sim_theta, "MA coefficients");
    simulate_cmd->add_option("--mu", sim_mu, "Process mean")->capture_default_str();
    simulate_cmd->add_flag("--no-mean", sim_no_mean, "Zero-mean model");
    simulate_cmd->add_option("--sigma2", sim_sigma2, "Innovation variance")
        ->capture_default_str();
    simulate_cmd->add_option("--n", sim_n, "Observations to generate")->capture_default_str();
    simulate_cmd->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
    simulate_cmd->add_option("--start-year", sim_start_year, "First calendar year")
        ->capture_default_str();
    simulate_cmd->add_option("--entity", sim_entity, "Entity name for the CSV")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: CliUsage: " << e.what() << "\n";
        return 2;
    }
    const bool as_json = format == "json";

    if (fit_cmd->parsed()) {
        const tsa::TimeSeries ts = tsa::ingest_csv(to_spec(fit_input));
        const tsa::ModelOrder order = parse_order(fit_order_text, fit_no_mean);
        const tsa::FittedModel model = tsa::fit(ts, order);
        if (as_json) {
            emit(tsa::to_json(model), true);
        } else {
            print_model_text(model);
        }
        return 0;
    }

    if (select_cmd->parsed()) {
        const tsa::TimeSeries ts = tsa::ingest_csv(to_spec(select_input));
        tsa::SearchConfig cfg;
        cfg.max_p = max_p;
        cfg.max_q = max_q;
        cfg.max_d = max_d;
        cfg.stationarity_alpha = alpha;
        cfg.kind = flag_stepwise && !flag_exhaustive ? tsa::SearchKind::stepwise
                   : flag_exhaustive && !flag_stepwise ? tsa::SearchKind::exhaustive
                                                       : tsa::SearchKind::both;
        const tsa::SelectionResult result = tsa::run_search(ts, cfg);
        if (as_json) {
            ordered_json j;
            j["d"] = result.primary().d_chosen;
            j["agreement"] =
                result.agreement.has_value() ? ordered_json(*result.agreement) : ordered_json(nullptr);
            j["stepwise"] =
                result.stepwise ? tsa::to_json(*result.stepwise) : ordered_json(nullptr);
            j["exhaustive"] =
                result.exhaustive ? tsa::to_json(*result.exhaustive) : ordered_json(nullptr);
            emit(j, true);
        } else {
            std::cout << "d chosen: " << result.primary().d_chosen << "\n";
            if (result.stepwise) {
                std::cout << "stepwise:   " << order_name(result.stepwise->chosen.order)
                          << ", AICc " << fmt(result.stepwise->chosen.aicc) << " ("
                          << result.stepwise->trace.size() << " candidates)\n";
            }
            if (result.exhaustive) {
                std::cout << "exhaustive: " << order_name(result.exhaustive->chosen.order)
                          << ", AICc " << fmt(result.exhaustive->chosen.aicc) << " ("
                          << result.exhaustive->trace.size() << " candidates)\n";
            }
            if (result.agreement.has_value()) {
                std::cout << "agreement: " << (*result.agreement ? "yes" : "no") << "\n";
            }
            std::cout << "\n";
            print_model_text(result.primary().chosen);
        }
        return 0;
    }

    if (diagnose_cmd->parsed()) {
        const tsa::TimeSeries ts = tsa::ingest_csv(to_spec(diagnose_input));
        const tsa::TimeSeries* target = &ts;
        std::optional<tsa::FittedModel> model;
        int fitdf_default = 0;
        if (!diag_order_text.empty()) {
            model = tsa::fit(ts, parse_order(diag_order_text, false));
            target = &model->residuals;
            fitdf_default = model->order.p + model->order.q;
        }
        const int lags = diag_lags.value_or(tsa::ljung_box_default_lags(target->size()));
        const int fitdf = diag_fitdf.value_or(fitdf_default);
        const tsa::TestResult lb = tsa::ljung_box(*target, lags, fitdf);
        const tsa::TestResult sw = tsa::shapiro_wilk(*target);
        const tsa::TestResult kp = tsa::kpss(*target);
        if (as_json) {
            ordered_json j;
            j["ljung_box"] = tsa::to_json(lb);
            j["ljung_box"]["lags"] = lags;
            j["ljung_box"]["fitdf"] = fitdf;
            j["shapiro_wilk"] = tsa::to_json(sw);
            j["kpss"] = tsa::to_json(kp);
            emit(j, true);
        } else {
            std::cout << "Diagnostics for " << (model ? "residuals of " : "")
                      << ts.label() << " (n=" << target->size() << ")\n";
            print_test_text("Ljung-Box (lags " + std::to_string(lags) + ", fitdf " +
                                std::to_string(fitdf) + ")",
                            lb);
            print_test_text("Shapiro-Wilk", sw);
            print_test_text("KPSS", kp);
        }
        return 0;
    }

    if (forecast_cmd->parsed()) {
        const tsa::TimeSeries ts = tsa::ingest_csv(to_spec(forecast_input));
        if (levels.empty()) levels = {0.80, 0.95};
        std::optional<tsa::FittedModel> model;
        if (!forecast_order_text.empty()) {
            model = tsa::fit(ts, parse_order(forecast_order_text, forecast_no_mean));
        } else {
            tsa::SearchConfig cfg;
            cfg.kind = tsa::SearchKind::stepwise;
            model = tsa::run_search(ts, cfg).primary().chosen;
        }
        const tsa::ForecastResult fc = tsa::forecast(*model, ts, horizon, levels);
        if (as_json) {
            ordered_json j;
            j["model"] = tsa::to_json(*model);
            j["forecast"] = tsa::to_json(fc);
            emit(j, true);
        } else {
            print_model_text(*model);
            std::cout << "\nForecast (origin " << fc.origin_year << ")\n";
            for (int m = 0; m < fc.horizon; ++m) {
                std::cout << "  " << fc.origin_year + m + 1 << "  "
                          << fmt(fc.point[static_cast<std::size_t>(m)]);
                for (const tsa::ForecastBand& band : fc.intervals) {
                    std::cout << "  [" << fmt(band.lower[static_cast<std::size_t>(m)]) << ", "
                              << fmt(band.upper[static_cast<std::size_t>(m)]) << "]@"
                              << band.level;
                }
                std::cout << "\n";
            }
        }
        return 0;
    }

    if (report_cmd->parsed()) {
        tsa::PipelineConfig config;
        config.search.max_p = report_max_p;
        config.search.max_q = report_max_q;
        config.search.max_d = report_max_d;
        config.search.kind = report_stepwise && !report_exhaustive ? tsa::SearchKind::stepwise
                             : report_exhaustive && !report_stepwise
                                 ? tsa::SearchKind::exhaustive
                                 : tsa::SearchKind::both;
        config.horizon = report_horizon;
        if (!report_levels.empty()) config.levels = report_levels;
        config.lb_lags = report_lags;
        config.lb_fitdf = report_fitdf;
        config.kpss_on_residuals = kpss_on == "residuals";
        const tsa::AnalysisReport report = tsa::run_pipeline(to_spec(report_input), config);
        if (as_json) {
            emit(tsa::to_json(report), true);
        } else {
            std::cout << tsa::render_text(report);
        }
        if (!svg_path.empty()) tsa::render_svg(report, svg_path);
        return 0;
    }

    if (simulate_cmd->parsed()) {
        const tsa::ModelOrder order = parse_order(sim_order_text, sim_no_mean);
        tsa::ArimaParams params;
        params.phi = sim_phi;
        params.theta = sim_theta;
        if (order.include_mean) params.mu = sim_mu;
        params.sigma2 = sim_sigma2;
        const tsa::TimeSeries ts =
            tsa::simulate(order, params, sim_n, sim_seed, sim_start_year, sim_entity);
        std::cout << "Entity,Year,Value\n";
        for (std::size_t i = 0; i < ts.size(); ++i) {
            char line[128];
            std::snprintf(line, sizeof(line), "%s,%d,%.6f", sim_entity.c_str(),
                          ts.year_at(i), ts[i]);
            std::cout << line << "\n";
        }
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const tsa::Error& e) {
        std::cerr << "error: " << e.category() << ": " << e.what() << "\n";
        const std::string& category = e.category();
        if (category == "SchemaError" || category == "ParseError" || category == "GapError") {
            return 2;
        }
        if (category == "IoError") return 4;
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << "\n";
        return 1;
    }
}
