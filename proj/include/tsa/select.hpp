#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsa/arima.hpp"
#include "tsa/series.hpp"

namespace tsa {

enum class SearchKind { stepwise, exhaustive, both };

struct SearchConfig {
    int max_p = 5;
    int max_q = 5;
    int max_d = 2;
    double stationarity_alpha = 0.05;
    SearchKind kind = SearchKind::both;
};

/// One fit attempt inside a search: the candidate order and either its AICc
/// or the reason the fit was rejected.
struct TraceEntry {
    ModelOrder order;
    std::optional<double> aicc;
    std::string failure;
};

/// Outcome of a single search strategy. `trace` lists every candidate in
/// evaluation order; the chosen model's AICc is the minimum finite AICc in
/// the trace. `agreement` is set only when the other strategy also ran.
struct SelectionReport {
    FittedModel chosen;
    std::vector<TraceEntry> trace;
    int d_chosen = 0;
    SearchKind kind = SearchKind::exhaustive;
    std::optional<bool> agreement;
};

/// Results of run_search. When both strategies run, `primary` prefers the
/// exhaustive report (the grid optimum).
struct SelectionResult {
    std::optional<SelectionReport> stepwise;
    std::optional<SelectionReport> exhaustive;
    std::optional<bool> agreement;

    const SelectionReport& primary() const;
};

/// Corrected Akaike information criterion:
/// (2k - 2 loglik) + 2k(k+1)/(n-k-1). Throws DegenerateInput when
/// n <= k + 1 (the correction blows up).
double aicc(double loglik, int k, int n);

/// Smallest d in [0, max_d] whose d-times-differenced series passes the KPSS
/// level-stationarity test at stationarity_alpha; max_d if every stage
/// rejects. Constant (or too-short) series at any stage are treated as
/// stationary at the current d.
int choose_d(const TimeSeries& ts, const SearchConfig& cfg);

/// Fits every (p, q) in [0, max_p] x [0, max_q] at d = choose_d (with and
/// without a mean term when d = 0) and returns the AICc minimum. Grid cells
/// are independent, so they run in parallel under Execution::parallel; the
/// trace is always assembled in (p, q, mean) lexicographic order.
SelectionReport exhaustive_search(const TimeSeries& ts, const SearchConfig& cfg,
                                  Execution exec = Execution::parallel);

/// Greedy neighborhood descent from seed orders {(0,0), (1,0), (0,1), (2,2)}:
/// moves to the best-AICc neighbor (p or q changed by one, both changed,
/// or the mean toggled when d = 0) until no neighbor improves.
/// Deterministic for a given series.
SelectionReport stepwise_search(const TimeSeries& ts, const SearchConfig& cfg);

/// Runs the configured strategy (or both, recording whether they picked the
/// same order).
SelectionResult run_search(const TimeSeries& ts, const SearchConfig& cfg,
                           Execution exec = Execution::parallel);

}  // namespace tsa
