#include "tsa/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tsa/errors.hpp"

namespace tsa {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

DiagnosticsBlock run_diagnostics(const TimeSeries& series_for_kpss, const FittedModel& model,
                                 const PipelineConfig& config,
                                 std::vector<std::string>& warnings) {
    DiagnosticsBlock block;
    const TimeSeries& residuals = model.residuals;
    const int n_res = static_cast<int>(residuals.size());

    int lags = config.lb_lags.value_or(ljung_box_default_lags(residuals.size()));
    int fitdf = config.lb_fitdf.value_or(model.order.p + model.order.q);
    if (lags >= n_res) lags = std::max(1, n_res - 1);
    if (fitdf >= lags) {
        warnings.push_back("ljung_box: fitdf " + std::to_string(fitdf) + " >= lags " +
                           std::to_string(lags) + "; using fitdf = 0");
        fitdf = 0;
    }
    block.lb_lags = lags;
    block.lb_fitdf = fitdf;
    try {
        block.ljung_box = ljung_box(residuals, lags, fitdf, config.exec);
    } catch (const Error& e) {
        warnings.push_back(std::string("ljung_box skipped: ") + e.what());
    }

    try {
        block.shapiro_wilk = shapiro_wilk(residuals);
    } catch (const Error& e) {
        warnings.push_back(std::string("shapiro_wilk skipped: ") + e.what());
    }

    try {
        block.kpss = kpss(config.kpss_on_residuals ? residuals : series_for_kpss, std::nullopt,
                          config.exec);
        if (block.kpss->clipped != Clip::none) {
            warnings.push_back(std::string("kpss: p-value clipped at the ") +
                               (block.kpss->clipped == Clip::at_upper ? "upper" : "lower") +
                               " end of the critical-value table");
        }
    } catch (const Error& e) {
        warnings.push_back(std::string("kpss skipped: ") + e.what());
    }
    return block;
}

AnalysisReport run_pipeline(const TimeSeries& ts, const PipelineConfig& config) {
    AnalysisReport report;
    report.label = ts.label();
    report.n = static_cast<int>(ts.size());
    report.start_year = ts.start_year();
    report.end_year = ts.end_year();
    report.series_values = ts.values();

    report.selection = run_search(ts, config.search, config.exec);
    const FittedModel& model = report.selection.primary().chosen;
    if (!model.converged) {
        report.warnings.push_back("optimizer did not converge; reporting the best point found");
    }

    report.diagnostics = run_diagnostics(ts, model, config, report.warnings);
    report.forecast = forecast(model, ts, config.horizon, config.levels);

    for (const ForecastBand& band : report.forecast.intervals) {
        if (std::any_of(band.lower.begin(), band.lower.end(), [](double v) { return v < 0.0; })) {
            std::ostringstream msg;
            msg << "forecast: lower " << static_cast<int>(std::lround(band.level * 100))
                << "% bound falls below zero";
            report.warnings.push_back(msg.str());
        }
    }
    return report;
}

AnalysisReport run_pipeline(const IngestSpec& spec, const PipelineConfig& config) {
    return run_pipeline(ingest_csv(spec), config);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

std::string clip_name(Clip clip) {
    switch (clip) {
        case Clip::at_lower: return "at_lower";
        case Clip::at_upper: return "at_upper";
        default: return "none";
    }
}

Clip clip_from_name(const std::string& name) {
    if (name == "at_lower") return Clip::at_lower;
    if (name == "at_upper") return Clip::at_upper;
    return Clip::none;
}

std::string kind_name(SearchKind kind) {
    switch (kind) {
        case SearchKind::stepwise: return "stepwise";
        case SearchKind::exhaustive: return "exhaustive";
        default: return "both";
    }
}

}  // namespace

ordered_json to_json(const TestResult& result) {
    return ordered_json{{"statistic", result.statistic},
                        {"p_value", result.p_value},
                        {"df_or_n", result.df_or_n},
                        {"clipped", clip_name(result.clipped)}};
}

ordered_json to_json(const ModelOrder& order) {
    return ordered_json{
        {"p", order.p}, {"d", order.d}, {"q", order.q}, {"include_mean", order.include_mean}};
}

ordered_json to_json(const FittedModel& model) {
    ordered_json j;
    j["order"] = to_json(model.order);
    j["phi"] = model.params.phi;
    j["theta"] = model.params.theta;
    if (model.params.mu.has_value()) {
        j["mu"] = *model.params.mu;
        j["intercept"] = intercept(model.params);
    } else {
        j["mu"] = nullptr;
        j["intercept"] = nullptr;
    }
    j["sigma2"] = model.params.sigma2;
    j["loglik"] = model.loglik;
    j["aic"] = model.aic;
    j["aicc"] = model.aicc;
    j["bic"] = model.bic;
    j["nobs"] = model.nobs;
    j["converged"] = model.converged;
    j["residuals"] = ordered_json{{"start_year", model.residuals.start_year()},
                                  {"label", model.residuals.label()},
                                  {"values", model.residuals.values()}};
    return j;
}

ordered_json to_json(const SelectionReport& report) {
    ordered_json trace = ordered_json::array();
    for (const TraceEntry& entry : report.trace) {
        ordered_json cell = to_json(entry.order);
        if (entry.aicc.has_value()) {
            cell["aicc"] = *entry.aicc;
        } else {
            cell["failure"] = entry.failure;
        }
        trace.push_back(std::move(cell));
    }
    ordered_json j;
    j["kind"] = kind_name(report.kind);
    j["d"] = report.d_chosen;
    j["agreement"] = report.agreement.has_value() ? ordered_json(*report.agreement)
                                                  : ordered_json(nullptr);
    j["chosen"] = to_json(report.chosen);
    j["trace"] = std::move(trace);
    return j;
}

ordered_json to_json(const ForecastResult& forecast) {
    ordered_json intervals = ordered_json::array();
    for (const ForecastBand& band : forecast.intervals) {
        intervals.push_back(ordered_json{
            {"level", band.level}, {"lower", band.lower}, {"upper", band.upper}});
    }
    return ordered_json{{"origin_year", forecast.origin_year},
                        {"horizon", forecast.horizon},
                        {"point", forecast.point},
                        {"intervals", std::move(intervals)}};
}

ordered_json to_json(const AnalysisReport& report) {
    ordered_json selection;
    selection["d"] = report.selection.primary().d_chosen;
    selection["agreement"] = report.selection.agreement.has_value()
                                 ? ordered_json(*report.selection.agreement)
                                 : ordered_json(nullptr);
    selection["stepwise"] =
        report.selection.stepwise ? to_json(*report.selection.stepwise) : ordered_json(nullptr);
    selection["exhaustive"] = report.selection.exhaustive ? to_json(*report.selection.exhaustive)
                                                          : ordered_json(nullptr);

    ordered_json diagnostics;
    if (report.diagnostics.ljung_box) {
        diagnostics["ljung_box"] = to_json(*report.diagnostics.ljung_box);
        diagnostics["ljung_box"]["lags"] = report.diagnostics.lb_lags;
        diagnostics["ljung_box"]["fitdf"] = report.diagnostics.lb_fitdf;
    } else {
        diagnostics["ljung_box"] = nullptr;
    }
    diagnostics["shapiro_wilk"] = report.diagnostics.shapiro_wilk
                                      ? to_json(*report.diagnostics.shapiro_wilk)
                                      : ordered_json(nullptr);
    diagnostics["kpss"] =
        report.diagnostics.kpss ? to_json(*report.diagnostics.kpss) : ordered_json(nullptr);

    ordered_json j;
    j["input"] = ordered_json{{"label", report.label},
                              {"n", report.n},
                              {"start_year", report.start_year},
                              {"end_year", report.end_year},
                              {"values", report.series_values}};
    j["selection"] = std::move(selection);
    j["diagnostics"] = std::move(diagnostics);
    j["forecast"] = to_json(report.forecast);
    j["warnings"] = report.warnings;
    return j;
}

namespace {

TestResult test_result_from_json(const ordered_json& j) {
    TestResult result;
    result.statistic = j.at("statistic").get<double>();
    result.p_value = j.at("p_value").get<double>();
    result.df_or_n = j.at("df_or_n").get<int>();
    result.clipped = clip_from_name(j.at("clipped").get<std::string>());
    return result;
}

ModelOrder order_from_json(const ordered_json& j) {
    return ModelOrder{j.at("p").get<int>(), j.at("d").get<int>(), j.at("q").get<int>(),
                      j.at("include_mean").get<bool>()};
}

FittedModel model_from_json(const ordered_json& j) {
    ArimaParams params;
    params.phi = j.at("phi").get<std::vector<double>>();
    params.theta = j.at("theta").get<std::vector<double>>();
    if (!j.at("mu").is_null()) params.mu = j.at("mu").get<double>();
    params.sigma2 = j.at("sigma2").get<double>();

    const ordered_json& res = j.at("residuals");
    TimeSeries residuals(res.at("values").get<std::vector<double>>(),
                         res.at("start_year").get<int>(), res.at("label").get<std::string>());

    return FittedModel{order_from_json(j.at("order")),
                       std::move(params),
                       j.at("loglik").get<double>(),
                       j.at("aic").get<double>(),
                       j.at("aicc").get<double>(),
                       j.at("bic").get<double>(),
                       std::move(residuals),
                       j.at("nobs").get<int>(),
                       j.at("converged").get<bool>()};
}

SearchKind kind_from_name(const std::string& name) {
    if (name == "stepwise") return SearchKind::stepwise;
    if (name == "exhaustive") return SearchKind::exhaustive;
    return SearchKind::both;
}

SelectionReport selection_report_from_json(const ordered_json& j) {
    SelectionReport report{model_from_json(j.at("chosen")),
                           {},
                           j.at("d").get<int>(),
                           kind_from_name(j.at("kind").get<std::string>()),
                           std::nullopt};
    if (!j.at("agreement").is_null()) report.agreement = j.at("agreement").get<bool>();
    for (const ordered_json& cell : j.at("trace")) {
        TraceEntry entry;
        entry.order = order_from_json(cell);
        if (cell.contains("aicc")) {
            entry.aicc = cell.at("aicc").get<double>();
        } else {
            entry.failure = cell.at("failure").get<std::string>();
        }
        report.trace.push_back(std::move(entry));
    }
    return report;
}

ForecastResult forecast_from_json(const ordered_json& j) {
    ForecastResult forecast;
    forecast.origin_year = j.at("origin_year").get<int>();
    forecast.horizon = j.at("horizon").get<int>();
    forecast.point = j.at("point").get<std::vector<double>>();
    for (const ordered_json& cell : j.at("intervals")) {
        ForecastBand band;
        band.level = cell.at("level").get<double>();
        band.lower = cell.at("lower").get<std::vector<double>>();
        band.upper = cell.at("upper").get<std::vector<double>>();
        forecast.intervals.push_back(std::move(band));
    }
    return forecast;
}

}  // namespace

AnalysisReport analysis_report_from_json(const ordered_json& j) {
    AnalysisReport report;
    const ordered_json& input = j.at("input");
    report.label = input.at("label").get<std::string>();
    report.n = input.at("n").get<int>();
    report.start_year = input.at("start_year").get<int>();
    report.end_year = input.at("end_year").get<int>();
    report.series_values = input.at("values").get<std::vector<double>>();

    const ordered_json& selection = j.at("selection");
    if (!selection.at("agreement").is_null()) {
        report.selection.agreement = selection.at("agreement").get<bool>();
    }
    if (!selection.at("stepwise").is_null()) {
        report.selection.stepwise = selection_report_from_json(selection.at("stepwise"));
    }
    if (!selection.at("exhaustive").is_null()) {
        report.selection.exhaustive = selection_report_from_json(selection.at("exhaustive"));
    }

    const ordered_json& diagnostics = j.at("diagnostics");
    if (!diagnostics.at("ljung_box").is_null()) {
        report.diagnostics.ljung_box = test_result_from_json(diagnostics.at("ljung_box"));
        report.diagnostics.lb_lags = diagnostics.at("ljung_box").at("lags").get<int>();
        report.diagnostics.lb_fitdf = diagnostics.at("ljung_box").at("fitdf").get<int>();
    }
    if (!diagnostics.at("shapiro_wilk").is_null()) {
        report.diagnostics.shapiro_wilk = test_result_from_json(diagnostics.at("shapiro_wilk"));
    }
    if (!diagnostics.at("kpss").is_null()) {
        report.diagnostics.kpss = test_result_from_json(diagnostics.at("kpss"));
    }

    report.forecast = forecast_from_json(j.at("forecast"));
    report.warnings = j.at("warnings").get<std::vector<std::string>>();
    return report;
}

// ---------------------------------------------------------------------------
// Text rendering
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4f", value);
    return buffer;
}

std::string order_name(const ModelOrder& order) {
    std::ostringstream out;
    out << "ARIMA(" << order.p << "," << order.d << "," << order.q << ")";
    if (order.include_mean) out << " with mean";
    return out.str();
}

void render_test_line(std::ostringstream& out, const std::string& name,
                      const std::optional<TestResult>& result, const std::string& extra) {
    out << "  " << name << ": ";
    if (!result.has_value()) {
        out << "skipped\n";
        return;
    }
    out << "statistic " << fmt(result->statistic) << ", p-value " << fmt(result->p_value);
    if (!extra.empty()) out << " (" << extra << ")";
    if (result->clipped == Clip::at_upper) out << " [clipped at table upper end]";
    if (result->clipped == Clip::at_lower) out << " [clipped at table lower end]";
    out << "\n";
}

}  // namespace

std::string render_text(const AnalysisReport& report) {
    std::ostringstream out;
    const FittedModel& model = report.model();

    out << "Series: " << report.label << " (" << report.start_year << "-" << report.end_year
        << ", n=" << report.n << ")\n\n";

    out << "Selection\n";
    out << "  d chosen: " << report.selection.primary().d_chosen << "\n";
    if (report.selection.stepwise) {
        out << "  stepwise:   " << order_name(report.selection.stepwise->chosen.order)
            << ", AICc " << fmt(report.selection.stepwise->chosen.aicc) << " ("
            << report.selection.stepwise->trace.size() << " candidates)\n";
    }
    if (report.selection.exhaustive) {
        out << "  exhaustive: " << order_name(report.selection.exhaustive->chosen.order)
            << ", AICc " << fmt(report.selection.exhaustive->chosen.aicc) << " ("
            << report.selection.exhaustive->trace.size() << " candidates)\n";
    }
    if (report.selection.agreement.has_value()) {
        out << "  agreement: " << (*report.selection.agreement ? "yes" : "no") << "\n";
    }

    out << "\nModel: " << order_name(model.order) << "\n";
    for (std::size_t i = 0; i < model.params.phi.size(); ++i) {
        out << "  phi" << i + 1 << "   = " << fmt(model.params.phi[i]) << "\n";
    }
    for (std::size_t i = 0; i < model.params.theta.size(); ++i) {
        out << "  theta" << i + 1 << " = " << fmt(model.params.theta[i]) << "\n";
    }
    if (model.params.mu.has_value()) {
        out << "  mean   = " << fmt(*model.params.mu) << "\n";
        out << "  intercept = " << fmt(intercept(model.params)) << "\n";
    }
    out << "  sigma2 = " << fmt(model.params.sigma2) << "\n";
    out << "  loglik = " << fmt(model.loglik) << "  AIC = " << fmt(model.aic)
        << "  AICc = " << fmt(model.aicc) << "  BIC = " << fmt(model.bic) << "\n";
    if (!model.converged) out << "  warning: optimizer did not converge\n";

    out << "\nResidual diagnostics\n";
    render_test_line(out, "Ljung-Box   ", report.diagnostics.ljung_box,
                     "lags " + std::to_string(report.diagnostics.lb_lags) + ", fitdf " +
                         std::to_string(report.diagnostics.lb_fitdf));
    render_test_line(out, "Shapiro-Wilk", report.diagnostics.shapiro_wilk, "");
    render_test_line(out, "KPSS        ", report.diagnostics.kpss, "");

    out << "\nForecast (origin " << report.forecast.origin_year << ")\n";
    out << "  year      point";
    for (const ForecastBand& band : report.forecast.intervals) {
        char head[64];
        std::snprintf(head, sizeof(head), "%10s%%lo%10s%%hi",
                      fmt(band.level * 100.0).substr(0, fmt(band.level * 100.0).find('.')).c_str(),
                      fmt(band.level * 100.0).substr(0, fmt(band.level * 100.0).find('.')).c_str());
        out << head;
    }
    out << "\n";
    for (int m = 0; m < report.forecast.horizon; ++m) {
        char line[256];
        std::snprintf(line, sizeof(line), "  %d %10s", report.forecast.origin_year + m + 1,
                      fmt(report.forecast.point[static_cast<std::size_t>(m)]).c_str());
        out << line;
        for (const ForecastBand& band : report.forecast.intervals) {
            char cell[128];
            std::snprintf(cell, sizeof(cell), " %11s %11s",
                          fmt(band.lower[static_cast<std::size_t>(m)]).c_str(),
                          fmt(band.upper[static_cast<std::size_t>(m)]).c_str());
            out << cell;
        }
        out << "\n";
    }

    if (!report.warnings.empty()) {
        out << "\nWarnings\n";
        for (const std::string& warning : report.warnings) out << "  - " << warning << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// SVG rendering
// ---------------------------------------------------------------------------

namespace {

constexpr double kSvgWidth = 860.0;
constexpr double kSvgHeight = 520.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 42.0;
constexpr double kMarginBottom = 52.0;

std::string coord(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", v);
    return buffer;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

double nice_step(double raw) {
    if (!(raw > 0.0)) return 1.0;
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
    const double scaled = raw / magnitude;
    double factor = 10.0;
    if (scaled <= 1.0) factor = 1.0;
    else if (scaled <= 2.0) factor = 2.0;
    else if (scaled <= 5.0) factor = 5.0;
    return factor * magnitude;
}

std::string level_tag(double level) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%g", level * 100.0);
    return buffer;
}

}  // namespace

std::string render_svg_document(const AnalysisReport& report) {
    const ForecastResult& fc = report.forecast;
    if (fc.horizon < 1 || report.series_values.empty()) {
        throw DegenerateInput("report has no forecast to draw");
    }
    const std::vector<double>& history = report.series_values;
    const int first_year = report.start_year;
    const int last_year = fc.origin_year + fc.horizon;

    double y_min = history[0];
    double y_max = history[0];
    for (double v : history) {
        y_min = std::min(y_min, v);
        y_max = std::max(y_max, v);
    }
    for (double v : fc.point) {
        y_min = std::min(y_min, v);
        y_max = std::max(y_max, v);
    }
    bool negative_lower = false;
    for (const ForecastBand& band : fc.intervals) {
        for (double v : band.lower) {
            if (v < 0.0) negative_lower = true;
            y_min = std::min(y_min, v);
        }
        for (double v : band.upper) y_max = std::max(y_max, v);
    }
    // Count-like data never dips below zero; clamp the fan there and say so.
    const bool clamp_at_zero =
        negative_lower && std::all_of(history.begin(), history.end(),
                                      [](double v) { return v >= 0.0; });
    if (clamp_at_zero) y_min = 0.0;
    if (y_max <= y_min) y_max = y_min + 1.0;
    const double pad = 0.05 * (y_max - y_min);
    const double y_lo = (clamp_at_zero && y_min == 0.0) ? 0.0 : y_min - pad;
    const double y_hi = y_max + pad;

    const double plot_w = kSvgWidth - kMarginLeft - kMarginRight;
    const double plot_h = kSvgHeight - kMarginTop - kMarginBottom;
    const auto sx = [&](double year) {
        return kMarginLeft + plot_w * (year - first_year) / std::max(1, last_year - first_year);
    };
    const auto sy = [&](double value) {
        double v = value;
        if (clamp_at_zero) v = std::max(v, 0.0);
        return kMarginTop + plot_h * (1.0 - (v - y_lo) / (y_hi - y_lo));
    };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgWidth << "\" height=\""
        << kSvgHeight << "\" viewBox=\"0 0 " << kSvgWidth << " " << kSvgHeight << "\">\n";
    out << "  <rect width=\"" << kSvgWidth << "\" height=\"" << kSvgHeight
        << "\" fill=\"#ffffff\"/>\n";
    out << "  <text x=\"" << coord(kMarginLeft) << "\" y=\"24\" font-family=\"sans-serif\" "
           "font-size=\"16\" fill=\"#222222\">"
        << xml_escape(report.label) << ": observed and forecast</text>\n";

    // Horizontal gridlines with labels.
    const double step = nice_step((y_hi - y_lo) / 6.0);
    out << "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"#555555\">\n";
    for (double tick = std::ceil(y_lo / step) * step; tick <= y_hi + 1e-9; tick += step) {
        const std::string y = coord(sy(tick));
        out << "    <line x1=\"" << coord(kMarginLeft) << "\" y1=\"" << y << "\" x2=\""
            << coord(kSvgWidth - kMarginRight) << "\" y2=\"" << y
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        char label[32];
        std::snprintf(label, sizeof(label), "%g", tick);
        out << "    <text x=\"" << coord(kMarginLeft - 8.0) << "\" y=\"" << coord(sy(tick) + 4.0)
            << "\" text-anchor=\"end\">" << label << "</text>\n";
    }
    out << "  </g>\n";

    // Interval bands, widest (highest confidence) first so narrower bands
    // nest on top; each polygon starts and ends at the last observation.
    const double origin_x = sx(fc.origin_year);
    const double origin_y = sy(history.back());
    out << "  <g class=\"bands\">\n";
    for (auto it = fc.intervals.rbegin(); it != fc.intervals.rend(); ++it) {
        out << "    <polygon class=\"band band-" << level_tag(it->level) << "\" points=\""
            << coord(origin_x) << "," << coord(origin_y);
        for (int m = 0; m < fc.horizon; ++m) {
            out << " " << coord(sx(fc.origin_year + m + 1)) << ","
                << coord(sy(it->upper[static_cast<std::size_t>(m)]));
        }
        for (int m = fc.horizon - 1; m >= 0; --m) {
            out << " " << coord(sx(fc.origin_year + m + 1)) << ","
                << coord(sy(it->lower[static_cast<std::size_t>(m)]));
        }
        out << "\" fill=\"#4477aa\" fill-opacity=\"0.18\" stroke=\"none\"/>\n";
    }
    out << "  </g>\n";

    // Observed series.
    out << "  <polyline class=\"history\" fill=\"none\" stroke=\"#222222\" stroke-width=\"1.5\""
           " points=\"";
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (i > 0) out << " ";
        out << coord(sx(first_year + static_cast<int>(i))) << "," << coord(sy(history[i]));
    }
    out << "\"/>\n";

    // Point forecast, joined to the last observation.
    out << "  <polyline class=\"forecast\" fill=\"none\" stroke=\"#4477aa\" stroke-width=\"2\""
           " stroke-dasharray=\"6,3\" points=\"" << coord(origin_x) << "," << coord(origin_y);
    for (int m = 0; m < fc.horizon; ++m) {
        out << " " << coord(sx(fc.origin_year + m + 1)) << ","
            << coord(sy(fc.point[static_cast<std::size_t>(m)]));
    }
    out << "\"/>\n";

    // Year axis.
    const int span = last_year - first_year;
    const int year_step = std::max(1, (span + 11) / 12);
    out << "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"#555555\">\n";
    for (int year = first_year; year <= last_year; ++year) {
        if ((year - first_year) % year_step != 0 && year != last_year) continue;
        out << "    <text x=\"" << coord(sx(year)) << "\" y=\""
            << coord(kSvgHeight - kMarginBottom + 18.0) << "\" text-anchor=\"middle\">" << year
            << "</text>\n";
    }
    out << "  </g>\n";
    out << "  <line x1=\"" << coord(kMarginLeft) << "\" y1=\""
        << coord(kSvgHeight - kMarginBottom) << "\" x2=\"" << coord(kSvgWidth - kMarginRight)
        << "\" y2=\"" << coord(kSvgHeight - kMarginBottom)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    if (clamp_at_zero) {
        out << "  <text class=\"warning\" x=\"" << coord(kMarginLeft) << "\" y=\""
            << coord(kSvgHeight - 12.0)
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#aa3333\">"
               "warning: lower interval bound below zero; band clipped at the axis</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void render_svg(const AnalysisReport& report, const std::string& path) {
    const std::string document = render_svg_document(report);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << document;
    if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace tsa
