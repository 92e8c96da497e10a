#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tsa {

/// Base class for all library errors. Every error carries a stable category
/// name used by the CLI for machine-parsable diagnostics and exit codes:
/// input/schema problems map to exit code 2, model errors to 3, I/O to 4.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

/// Input that is structurally valid but unusable: empty or constant series,
/// too few observations for the requested operation, invalid lag counts.
struct DegenerateInput : Error {
    explicit DegenerateInput(const std::string& m) : Error("DegenerateInput", m) {}
};

/// AR polynomial has a root on or inside the unit circle (or the MA
/// polynomial does, for invertibility violations).
struct NonStationaryParams : Error {
    explicit NonStationaryParams(const std::string& m) : Error("NonStationaryParams", m) {}
};

/// A mean-dependent quantity was requested from a model without a mean term.
struct MissingMean : Error {
    explicit MissingMean(const std::string& m) : Error("MissingMean", m) {}
};

/// Optimizer exhausted its iteration budget. Fitting reports this as a flag
/// on the result rather than throwing; the type exists for callers that
/// choose to escalate.
struct ConvergenceFailure : Error {
    explicit ConvergenceFailure(const std::string& m) : Error("ConvergenceFailure", m) {}
};

/// Sample size outside the supported range of a statistical approximation.
struct UnsupportedSampleSize : Error {
    explicit UnsupportedSampleSize(const std::string& m) : Error("UnsupportedSampleSize", m) {}
};

/// Every candidate model in a search failed to fit.
struct SelectionFailure : Error {
    explicit SelectionFailure(const std::string& m) : Error("SelectionFailure", m) {}
};

/// CSV header does not contain a referenced column.
struct SchemaError : Error {
    explicit SchemaError(const std::string& m) : Error("SchemaError", m) {}
};

/// Missing or duplicated years in an ingested series.
struct GapError : Error {
    explicit GapError(const std::string& m) : Error("GapError", m) {}
};

/// A cell could not be parsed as the expected type.
struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error("ParseError", m) {}
};

/// Filesystem-level failure (unreadable input, unwritable output).
struct IoError : Error {
    explicit IoError(const std::string& m) : Error("IoError", m) {}
};

}  // namespace tsa
