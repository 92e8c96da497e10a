// Serial vs OpenMP timings for the data-parallel kernels: the lag-product
// kernel (behind acf and the KPSS long-run variance) and the exhaustive
// model-search grid. Each comparison also checks that the two policies
// produce identical results.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "tsa/arima.hpp"
#include "tsa/diagnostics.hpp"
#include "tsa/select.hpp"
#include "tsa/series.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void print_row(const std::string& name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-34s %10.1f ms %10.1f ms %8.2fx   %s\n", name.c_str(), serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
    std::printf("threads available: %d (OpenMP %s)\n\n", tsa::max_threads(),
                tsa::openmp_enabled() ? "enabled" : "disabled");
    std::printf("%-34s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        const tsa::ModelOrder order{1, 0, 0, true};
        tsa::ArimaParams params;
        params.phi = {0.8};
        params.mu = 10.0;
        params.sigma2 = 1.0;
        const tsa::TimeSeries big = tsa::simulate(order, params, 400000, 42);

        auto t0 = Clock::now();
        const std::vector<double> serial = tsa::acf(big, 4000, tsa::Execution::serial);
        const double serial_ms = ms_since(t0);

        t0 = Clock::now();
        const std::vector<double> parallel = tsa::acf(big, 4000, tsa::Execution::parallel);
        const double parallel_ms = ms_since(t0);
        print_row("acf (n=400k, 4000 lags)", serial_ms, parallel_ms, serial == parallel);

        t0 = Clock::now();
        const tsa::TestResult kpss_serial = tsa::kpss(big, 20000, tsa::Execution::serial);
        const double kpss_serial_ms = ms_since(t0);

        t0 = Clock::now();
        const tsa::TestResult kpss_parallel = tsa::kpss(big, 20000, tsa::Execution::parallel);
        const double kpss_parallel_ms = ms_since(t0);
        print_row("kpss long-run var (n=400k, l=20k)", kpss_serial_ms, kpss_parallel_ms,
                  kpss_serial.statistic == kpss_parallel.statistic &&
                      kpss_serial.p_value == kpss_parallel.p_value);
    }

    {
        const tsa::ModelOrder order{2, 0, 1, true};
        tsa::ArimaParams params;
        params.phi = {0.6, -0.2};
        params.theta = {0.4};
        params.mu = 100.0;
        params.sigma2 = 4.0;
        const tsa::TimeSeries series = tsa::simulate(order, params, 600, 7);

        tsa::SearchConfig cfg;
        cfg.max_p = 3;
        cfg.max_q = 3;

        auto t0 = Clock::now();
        const tsa::SelectionReport serial =
            tsa::exhaustive_search(series, cfg, tsa::Execution::serial);
        const double serial_ms = ms_since(t0);

        t0 = Clock::now();
        const tsa::SelectionReport parallel =
            tsa::exhaustive_search(series, cfg, tsa::Execution::parallel);
        const double parallel_ms = ms_since(t0);

        bool identical = serial.trace.size() == parallel.trace.size() &&
                         serial.chosen.order == parallel.chosen.order &&
                         serial.chosen.aicc == parallel.chosen.aicc;
        for (std::size_t i = 0; identical && i < serial.trace.size(); ++i) {
            identical = serial.trace[i].order == parallel.trace[i].order &&
                        serial.trace[i].aicc == parallel.trace[i].aicc;
        }
        print_row("exhaustive search (n=600, 4x4 grid)", serial_ms, parallel_ms, identical);
    }

    return 0;
}
