#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "tdf/adaptive_solver.hpp"
#include "tdf/jump_model.hpp"
#include "tdf/market_data.hpp"
#include "tdf/strategy.hpp"

namespace tdf {

// Terminal-wealth sample summary (one table row).
struct OutcomeStats {
    double mean = 0.0;
    double std = 0.0; // sample std, n-1; 0 by convention for n = 1
    std::vector<std::pair<double, double>> shortfall_probs; // (threshold, P[W_T < threshold])
    std::size_t n_paths = 0;
    double mc_standard_error_mean = 0.0;
    bool degenerate = false; // single-element sample
};

// Per-date mean and dispersion of the applied equity fraction.
struct PathDiagnostics {
    std::vector<double> mean_p;
    std::vector<double> std_p;
};

// A strategy with the adaptive reference resolved to a loaded grid.
struct BoundStrategy {
    Strategy strategy;
    const PolicyGrid* grid = nullptr; // required for AdaptiveStrategyRef

    double fraction_at(int t, double wealth) const;
};

struct McResult {
    std::vector<double> terminal_wealth; // one per path, path order
    PathDiagnostics diagnostics;
};

// Synthetic-market Monte Carlo: one Kou gross return per year per path,
// deterministic bond exp(r*dt). Per-path streams (see rng.hpp) and
// fixed-block accumulation make the output independent of thread count.
McResult run_monte_carlo(const BoundStrategy& strategy, const Scenario& scenario,
                         const KouParams& params, std::size_t n_paths, std::uint64_t seed);

OutcomeStats summary_stats(const std::vector<double>& terminal_wealth,
                           const std::vector<double>& thresholds);

// Monthly real log returns for both assets drawn from the same months.
struct PairedReturns {
    ReturnSeries equity;
    ReturnSeries bond;

    std::size_t size() const { return equity.size(); }
};

struct ResampledPath {
    std::vector<double> equity_log;  // 12 * horizon_years entries
    std::vector<double> bond_log;
    std::vector<std::size_t> source_index; // historical month index per entry
};

// ceil(horizon/block) blocks of 12*block_years months, uniform random
// start months with circular wrap-around, final block truncated to the
// horizon. Equity and bond are sampled with the same indices.
ResampledPath block_resample(const PairedReturns& series, double block_years,
                             double horizon_years, std::uint64_t seed);

struct BootstrapResult {
    std::vector<double> terminal_wealth;
    PathDiagnostics diagnostics;
};

// Applies the (frozen) strategy along resampled monthly paths: monthly
// compounding within each year, injection and rebalancing annually.
BootstrapResult run_bootstrap(const BoundStrategy& strategy, const Scenario& scenario,
                              const PairedReturns& series, double block_years,
                              std::size_t n_resamples, std::uint64_t seed);

// Single deterministic pass over a historical window: annual injections,
// monthly compounding, wealth recorded at each year end.
struct ReplayResult {
    std::vector<std::string> strategy_names;
    std::vector<std::vector<double>> wealth_by_year; // [year 0..T][strategy]
};

ReplayResult replay_historical(const std::vector<std::pair<std::string, BoundStrategy>>& strategies,
                               const Scenario& scenario, const PairedReturns& series,
                               YearMonth series_start, YearMonth window_start);

} // namespace tdf
