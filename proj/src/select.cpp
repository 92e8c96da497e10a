#include "tsa/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "tsa/diagnostics.hpp"
#include "tsa/errors.hpp"

namespace tsa {

namespace {

constexpr double kAiccTie = 1e-6;

/// Ordering used everywhere a winner is picked: lower AICc wins; values
/// within the tie band fall back to parsimony (smaller p+q, then smaller p,
/// then no mean term).
bool better_candidate(double aicc_a, const ModelOrder& a, double aicc_b, const ModelOrder& b) {
    if (aicc_a < aicc_b - kAiccTie) return true;
    if (aicc_a > aicc_b + kAiccTie) return false;
    const auto rank = [](const ModelOrder& o) {
        return std::make_tuple(o.p + o.q, o.p, o.include_mean ? 1 : 0);
    };
    return rank(a) < rank(b);
}

struct Candidate {
    ModelOrder order;
    std::optional<FittedModel> model;
    std::optional<double> aicc;
    std::string failure;
};

// Admissibility screens applied to every candidate fit. Roots within 1% of
// the unit circle mark a nearly integrated or non-invertible fit; AR and MA
// roots closer than the separation margin mark cancelling factors, i.e. a
// lower-order model wearing extra parameters. Both kinds show inflated
// likelihoods that AICc cannot police, so they are recorded as failures.
constexpr double kRootMargin = 1.01;
constexpr double kSeparationMargin = 0.1;

Candidate try_fit(const TimeSeries& ts, const ModelOrder& order) {
    Candidate c;
    c.order = order;
    try {
        FittedModel model = fit(ts, order);
        if (min_root_modulus(model.params.phi, model.params.theta) < kRootMargin) {
            c.failure = "RootsNearUnitCircle: fitted polynomial root inside radius 1.01";
        } else if (min_root_separation(model.params.phi, model.params.theta) <
                   kSeparationMargin) {
            c.failure = "CommonFactor: AR and MA roots nearly cancel";
        } else if (order.p + order.q > 0 &&
                   coefficient_standard_errors(ts, model).empty()) {
            c.failure = "InformationMatrixSingular: coefficient standard errors undefined";
        } else {
            c.aicc = model.aicc;
            c.model = std::move(model);
        }
    } catch (const Error& e) {
        c.failure = std::string(e.category()) + ": " + e.what();
    }
    return c;
}

SelectionReport report_from(std::vector<Candidate> candidates, int d, SearchKind kind) {
    int best = -1;
    for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
        const Candidate& c = candidates[static_cast<std::size_t>(i)];
        if (!c.aicc.has_value()) continue;
        if (best < 0 || better_candidate(*c.aicc, c.order,
                                         *candidates[static_cast<std::size_t>(best)].aicc,
                                         candidates[static_cast<std::size_t>(best)].order)) {
            best = i;
        }
    }
    if (best < 0) throw SelectionFailure("no candidate model could be fitted");

    SelectionReport report{std::move(*candidates[static_cast<std::size_t>(best)].model),
                           {},
                           d,
                           kind,
                           std::nullopt};
    report.trace.reserve(candidates.size());
    for (const Candidate& c : candidates) {
        report.trace.push_back(TraceEntry{c.order, c.aicc, c.failure});
    }
    return report;
}

}  // namespace

double aicc(double loglik, int k, int n) {
    if (n <= k + 1) {
        throw DegenerateInput("aicc requires n > k + 1 (correction term is infinite)");
    }
    return (2.0 * k - 2.0 * loglik) + 2.0 * k * (k + 1.0) / (n - k - 1.0);
}

int choose_d(const TimeSeries& ts, const SearchConfig& cfg) {
    if (cfg.max_d < 0 || cfg.max_d > 4) throw DegenerateInput("max_d must be in [0, 4]");
    const double critical = kpss_critical_value(cfg.stationarity_alpha);

    TimeSeries current = ts;
    for (int d = 0; d <= cfg.max_d; ++d) {
        if (current.size() < 10) return d;  // too short to test; assume level-stationary
        if (sample_variance(current) <= 0.0) return d;  // constant is stationary
        if (kpss(current).statistic < critical) return d;
        if (d == cfg.max_d) break;
        if (current.size() < 2) return d;
        current = difference(current, 1).series;
    }
    return cfg.max_d;
}

SelectionReport exhaustive_search(const TimeSeries& ts, const SearchConfig& cfg, Execution exec) {
    if (cfg.max_p < 0 || cfg.max_q < 0) throw DegenerateInput("grid bounds must be non-negative");
    const int d = choose_d(ts, cfg);

    std::vector<ModelOrder> grid;
    for (int p = 0; p <= cfg.max_p; ++p) {
        for (int q = 0; q <= cfg.max_q; ++q) {
            grid.push_back(ModelOrder{p, d, q, false});
            if (d == 0) grid.push_back(ModelOrder{p, d, q, true});
        }
    }

    std::vector<Candidate> candidates(grid.size());
    const int cells = static_cast<int>(grid.size());
    // Cells are independent fits; each result lands in its own slot, so the
    // outcome is identical for any schedule or thread count.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
#endif
    for (int i = 0; i < cells; ++i) {
        candidates[static_cast<std::size_t>(i)] = try_fit(ts, grid[static_cast<std::size_t>(i)]);
    }
    (void)exec;
    return report_from(std::move(candidates), d, SearchKind::exhaustive);
}

SelectionReport stepwise_search(const TimeSeries& ts, const SearchConfig& cfg) {
    if (cfg.max_p < 0 || cfg.max_q < 0) throw DegenerateInput("grid bounds must be non-negative");
    const int d = choose_d(ts, cfg);
    const bool mean_allowed = d == 0;

    std::vector<Candidate> evaluated;
    std::map<std::tuple<int, int, bool>, std::optional<double>> seen;

    auto evaluate = [&](int p, int q, bool mean) -> std::optional<double> {
        const auto key = std::make_tuple(p, q, mean);
        if (auto it = seen.find(key); it != seen.end()) return it->second;
        Candidate c = try_fit(ts, ModelOrder{p, d, q, mean});
        const std::optional<double> value = c.aicc;
        evaluated.push_back(std::move(c));
        seen.emplace(key, value);
        return value;
    };

    struct Current {
        ModelOrder order;
        double aicc = std::numeric_limits<double>::infinity();
        bool valid = false;
    };

    // One greedy descent per seed model, all sharing the evaluation cache;
    // the winner is the best candidate seen across the walks. Walks are
    // capped at the grid size so AICc ties at the edge of the 1e-6 band
    // cannot cycle.
    const int max_moves = (cfg.max_p + 1) * (cfg.max_q + 1) * (mean_allowed ? 2 : 1);
    bool any_seed_fitted = false;
    auto walk_from = [&](int seed_p, int seed_q, bool seed_mean) {
        Current current;
        auto consider = [&](int p, int q, bool mean) {
            if (p < 0 || p > cfg.max_p || q < 0 || q > cfg.max_q) return;
            if (mean && !mean_allowed) return;
            const ModelOrder order{p, d, q, mean};
            const std::optional<double> value = evaluate(p, q, mean);
            if (!value.has_value()) return;
            if (!current.valid || better_candidate(*value, order, current.aicc, current.order)) {
                current = Current{order, *value, true};
            }
        };
        consider(seed_p, seed_q, seed_mean);
        if (!current.valid) return;
        any_seed_fitted = true;
        for (int move = 0; move < max_moves; ++move) {
            const Current before = current;
            const int p = before.order.p, q = before.order.q;
            const bool mean = before.order.include_mean;
            for (int dp = -1; dp <= 1; ++dp) {
                for (int dq = -1; dq <= 1; ++dq) {
                    if (dp == 0 && dq == 0) continue;
                    consider(p + dp, q + dq, mean);
                }
            }
            if (mean_allowed) consider(p, q, !mean);
            if (current.order == before.order) break;
        }
    };

    for (const auto& [p, q] : std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {0, 1}, {2, 2}}) {
        walk_from(std::min(p, cfg.max_p), std::min(q, cfg.max_q), mean_allowed);
    }
    if (!any_seed_fitted && mean_allowed) {
        for (const auto& [p, q] : std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {0, 1}}) {
            walk_from(std::min(p, cfg.max_p), std::min(q, cfg.max_q), false);
        }
    }
    if (!any_seed_fitted) throw SelectionFailure("no stepwise seed model could be fitted");

    return report_from(std::move(evaluated), d, SearchKind::stepwise);
}

const SelectionReport& SelectionResult::primary() const {
    if (exhaustive.has_value()) return *exhaustive;
    if (stepwise.has_value()) return *stepwise;
    throw SelectionFailure("selection produced no report");
}

SelectionResult run_search(const TimeSeries& ts, const SearchConfig& cfg, Execution exec) {
    SelectionResult result;
    if (cfg.kind == SearchKind::stepwise || cfg.kind == SearchKind::both) {
        result.stepwise = stepwise_search(ts, cfg);
    }
    if (cfg.kind == SearchKind::exhaustive || cfg.kind == SearchKind::both) {
        result.exhaustive = exhaustive_search(ts, cfg, exec);
    }
    if (result.stepwise && result.exhaustive) {
        const bool agree = result.stepwise->chosen.order == result.exhaustive->chosen.order;
        result.agreement = agree;
        result.stepwise->agreement = agree;
        result.exhaustive->agreement = agree;
    }
    return result;
}

}  // namespace tsa
