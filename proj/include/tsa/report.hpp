#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsa/diagnostics.hpp"
#include "tsa/forecast.hpp"
#include "tsa/io.hpp"
#include "tsa/select.hpp"

namespace tsa {

struct PipelineConfig {
    SearchConfig search;
    int horizon = 11;
    std::vector<double> levels{0.80, 0.95};
    /// Ljung-Box lag count; defaults to min(10, n / 5).
    std::optional<int> lb_lags;
    /// Ljung-Box fitted-parameter adjustment; defaults to p + q of the
    /// chosen model.
    std::optional<int> lb_fitdf;
    /// Run KPSS on the residuals (default) or on the undifferenced series.
    bool kpss_on_residuals = true;
    Execution exec = Execution::parallel;
};

/// Residual diagnostics actually run; entries are absent when a test's
/// preconditions could not be met (a warning records why).
struct DiagnosticsBlock {
    std::optional<TestResult> ljung_box;
    int lb_lags = 0;
    int lb_fitdf = 0;
    std::optional<TestResult> shapiro_wilk;
    std::optional<TestResult> kpss;
};

/// Everything the full pipeline produced, in one serializable bundle. The
/// observed values ride along so charts can be rendered from the report
/// alone.
struct AnalysisReport {
    std::string label;
    int n = 0;
    int start_year = 0;
    int end_year = 0;
    std::vector<double> series_values;
    SelectionResult selection;
    DiagnosticsBlock diagnostics;
    ForecastResult forecast;
    std::vector<std::string> warnings;

    const FittedModel& model() const { return selection.primary().chosen; }
};

/// ingest -> choose_d -> order search -> residual diagnostics -> forecast.
/// Stage errors propagate with their categories intact.
AnalysisReport run_pipeline(const IngestSpec& spec, const PipelineConfig& config);

/// Same pipeline for an already-loaded series.
AnalysisReport run_pipeline(const TimeSeries& ts, const PipelineConfig& config);

/// Residual diagnostics with the pipeline's defaults; reused by the CLI.
DiagnosticsBlock run_diagnostics(const TimeSeries& series_for_kpss, const FittedModel& model,
                                 const PipelineConfig& config, std::vector<std::string>& warnings);

// --- serialization -------------------------------------------------------

nlohmann::ordered_json to_json(const TestResult& result);
nlohmann::ordered_json to_json(const ModelOrder& order);
nlohmann::ordered_json to_json(const FittedModel& model);
nlohmann::ordered_json to_json(const SelectionReport& report);
nlohmann::ordered_json to_json(const ForecastResult& forecast);
nlohmann::ordered_json to_json(const AnalysisReport& report);

/// Inverse of to_json(AnalysisReport); used for lossless round-trips.
AnalysisReport analysis_report_from_json(const nlohmann::ordered_json& j);

/// Human-readable report (numbers at four decimal places).
std::string render_text(const AnalysisReport& report);

/// Standalone SVG fan chart: history, point forecast, and nested interval
/// bands. Byte-deterministic for identical input. Throws IoError when the
/// path cannot be written.
void render_svg(const AnalysisReport& report, const std::string& path);

/// The SVG document itself (render_svg writes exactly these bytes).
std::string render_svg_document(const AnalysisReport& report);

}  // namespace tsa
