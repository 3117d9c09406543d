#include "tdf/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "tdf/numerics.hpp"
#include "tdf/rng.hpp"

namespace tdf {

namespace {

// Paths are accumulated in fixed blocks of this many paths; per-block
// partial sums are combined in block order afterwards, so reported
// statistics are bit-identical for any thread count.
constexpr std::size_t kPathBlock = 4096;

struct BlockAccumulator {
    std::size_t n_dates;
    std::size_t n_blocks;
    std::vector<double> p_sum;  // [block][date]
    std::vector<double> p2_sum; // [block][date]

    BlockAccumulator(std::size_t dates, std::size_t paths)
        : n_dates(dates), n_blocks((paths + kPathBlock - 1) / kPathBlock),
          p_sum(n_dates * std::max<std::size_t>(n_blocks, 1), 0.0),
          p2_sum(p_sum.size(), 0.0) {}

    void add(std::size_t block, std::size_t date, double p) {
        p_sum[block * n_dates + date] += p;
        p2_sum[block * n_dates + date] += p * p;
    }

    PathDiagnostics finish(std::size_t n_paths) const {
        PathDiagnostics d;
        d.mean_p.assign(n_dates, 0.0);
        d.std_p.assign(n_dates, 0.0);
        if (n_paths == 0) return d;
        for (std::size_t t = 0; t < n_dates; ++t) {
            double s = 0.0, s2 = 0.0;
            for (std::size_t b = 0; b < n_blocks; ++b) {
                s += p_sum[b * n_dates + t];
                s2 += p2_sum[b * n_dates + t];
            }
            const double mean = s / static_cast<double>(n_paths);
            d.mean_p[t] = mean;
            d.std_p[t] = std::sqrt(std::max(0.0, s2 / static_cast<double>(n_paths) - mean * mean));
        }
        return d;
    }
};

} // namespace

double BoundStrategy::fraction_at(int t, double wealth) const {
    if (const auto* c = std::get_if<ConstantStrategy>(&strategy)) return c->p;
    if (const auto* g = std::get_if<GlideStrategy>(&strategy))
        return g->fractions[static_cast<std::size_t>(t)];
    require(grid != nullptr, Errc::bad_config, "adaptive strategy has no policy grid bound");
    return policy_lookup(*grid, wealth, grid->times[static_cast<std::size_t>(t)]);
}

McResult run_monte_carlo(const BoundStrategy& strategy, const Scenario& scenario,
                         const KouParams& params, std::size_t n_paths, std::uint64_t seed) {
    scenario.validate();
    validate_strategy(strategy.strategy, scenario);
    require(n_paths >= 1, Errc::bad_config, "n_paths must be >= 1");
    const int T = scenario.n_periods();
    const double dt = scenario.rebalance_interval;
    const double bond_gross = std::exp(params.r * dt);
    const KouSampler sampler(params, dt);

    McResult out;
    out.terminal_wealth.resize(n_paths);
    BlockAccumulator acc(static_cast<std::size_t>(T), n_paths);

    parallel_for(acc.n_blocks, [&](std::size_t block) {
        const std::size_t begin = block * kPathBlock;
        const std::size_t end = std::min(begin + kPathBlock, n_paths);
        for (std::size_t path = begin; path < end; ++path) {
            std::mt19937_64 rng = path_rng(seed, path);
            double w = scenario.initial_wealth;
            for (int t = 0; t < T; ++t) {
                const double p = strategy.fraction_at(t, w);
                acc.add(block, static_cast<std::size_t>(t), p);
                const double equity_gross = sampler(rng);
                w = step_wealth(w, scenario.contribution_at(t), p, equity_gross, bond_gross);
            }
            out.terminal_wealth[path] = w;
        }
    });
    out.diagnostics = acc.finish(n_paths);
    return out;
}

OutcomeStats summary_stats(const std::vector<double>& terminal_wealth,
                           const std::vector<double>& thresholds) {
    require(!terminal_wealth.empty(), Errc::empty_sample, "no terminal wealth values");
    OutcomeStats s;
    s.n_paths = terminal_wealth.size();
    const MeanStd ms = mean_std(terminal_wealth);
    s.mean = ms.mean;
    s.std = ms.std; // 0 by convention when n == 1
    s.degenerate = terminal_wealth.size() == 1;
    s.mc_standard_error_mean = s.std / std::sqrt(static_cast<double>(s.n_paths));
    for (const double thr : thresholds) {
        std::size_t count = 0;
        for (const double w : terminal_wealth) count += w < thr ? 1 : 0;
        s.shortfall_probs.emplace_back(thr,
                                       static_cast<double>(count) / static_cast<double>(s.n_paths));
    }
    return s;
}

namespace {

struct BlockPlan {
    std::size_t block_months;
    std::size_t horizon_months;
};

BlockPlan make_block_plan(const PairedReturns& series, double block_years, double horizon_years) {
    require(block_years > 0.0, Errc::bad_config, "block length must be positive");
    require(horizon_years > 0.0, Errc::bad_config, "horizon must be positive");
    const double bm = 12.0 * block_years;
    const double hm = 12.0 * horizon_years;
    BlockPlan plan{static_cast<std::size_t>(std::llround(bm)),
                   static_cast<std::size_t>(std::llround(hm))};
    require(std::fabs(bm - static_cast<double>(plan.block_months)) < 1e-9 && plan.block_months >= 1,
            Errc::bad_config, "block length must be a whole number of months");
    require(std::fabs(hm - static_cast<double>(plan.horizon_months)) < 1e-9,
            Errc::bad_config, "horizon must be a whole number of months");
    require(series.equity.size() == series.bond.size() &&
                series.equity.start_month == series.bond.start_month,
            Errc::length_mismatch, "equity and bond series must align");
    require(series.size() >= plan.block_months, Errc::block_too_long,
            "block of " + std::to_string(plan.block_months) + " months exceeds the " +
                std::to_string(series.size()) + "-month history");
    return plan;
}

ResampledPath resample_with_rng(const PairedReturns& series, const BlockPlan& plan,
                                std::mt19937_64& rng) {
    const std::size_t n = series.size();
    ResampledPath path;
    path.equity_log.reserve(plan.horizon_months);
    path.bond_log.reserve(plan.horizon_months);
    path.source_index.reserve(plan.horizon_months);
    while (path.equity_log.size() < plan.horizon_months) {
        const std::size_t start = bounded_index(rng, n);
        const std::size_t take =
            std::min(plan.block_months, plan.horizon_months - path.equity_log.size());
        for (std::size_t j = 0; j < take; ++j) {
            const std::size_t idx = (start + j) % n; // circular wrap-around
            path.equity_log.push_back(series.equity.log_returns[idx]);
            path.bond_log.push_back(series.bond.log_returns[idx]);
            path.source_index.push_back(idx);
        }
    }
    return path;
}

} // namespace

ResampledPath block_resample(const PairedReturns& series, double block_years,
                             double horizon_years, std::uint64_t seed) {
    const BlockPlan plan = make_block_plan(series, block_years, horizon_years);
    std::mt19937_64 rng = path_rng(seed, 0);
    return resample_with_rng(series, plan, rng);
}

BootstrapResult run_bootstrap(const BoundStrategy& strategy, const Scenario& scenario,
                              const PairedReturns& series, double block_years,
                              std::size_t n_resamples, std::uint64_t seed) {
    scenario.validate();
    validate_strategy(strategy.strategy, scenario);
    require(n_resamples >= 1, Errc::bad_config, "n_resamples must be >= 1");
    const int T = scenario.n_periods();
    const BlockPlan plan =
        make_block_plan(series, block_years, static_cast<double>(scenario.horizon_years));

    BootstrapResult out;
    out.terminal_wealth.resize(n_resamples);
    BlockAccumulator acc(static_cast<std::size_t>(T), n_resamples);

    parallel_for(acc.n_blocks, [&](std::size_t block) {
        const std::size_t begin = block * kPathBlock;
        const std::size_t end = std::min(begin + kPathBlock, n_resamples);
        for (std::size_t path = begin; path < end; ++path) {
            std::mt19937_64 rng = path_rng(seed, path);
            const ResampledPath rp = resample_with_rng(series, plan, rng);
            double w = scenario.initial_wealth;
            for (int t = 0; t < T; ++t) {
                const double p = strategy.fraction_at(t, w);
                acc.add(block, static_cast<std::size_t>(t), p);
                // monthly compounding within the year, one rebalance per year
                double eq_log = 0.0, bd_log = 0.0;
                for (int m = 0; m < 12; ++m) {
                    const std::size_t idx = static_cast<std::size_t>(t) * 12 +
                                            static_cast<std::size_t>(m);
                    eq_log += rp.equity_log[idx];
                    bd_log += rp.bond_log[idx];
                }
                w = step_wealth(w, scenario.contribution_at(t), p, std::exp(eq_log),
                                std::exp(bd_log));
            }
            out.terminal_wealth[path] = w;
        }
    });
    out.diagnostics = acc.finish(n_resamples);
    return out;
}

ReplayResult replay_historical(const std::vector<std::pair<std::string, BoundStrategy>>& strategies,
                               const Scenario& scenario, const PairedReturns& series,
                               YearMonth series_start, YearMonth window_start) {
    scenario.validate();
    const int T = scenario.n_periods();
    const int offset = months_between(series_start, window_start);
    require(offset >= 0 && offset + 12 * T <= static_cast<int>(series.size()),
            Errc::window_out_of_range,
            "window " + window_start.str() + " + " + std::to_string(T) +
                "y not covered by the return series");

    ReplayResult out;
    out.wealth_by_year.assign(static_cast<std::size_t>(T) + 1, {});
    for (const auto& [name, bound] : strategies) {
        validate_strategy(bound.strategy, scenario);
        out.strategy_names.push_back(name);
        double w = scenario.initial_wealth;
        out.wealth_by_year[0].push_back(w);
        for (int t = 0; t < T; ++t) {
            const double p = bound.fraction_at(t, w);
            double eq_log = 0.0, bd_log = 0.0;
            for (int m = 0; m < 12; ++m) {
                const std::size_t idx = static_cast<std::size_t>(offset + 12 * t + m);
                eq_log += series.equity.log_returns[idx];
                bd_log += series.bond.log_returns[idx];
            }
            w = step_wealth(w, scenario.contribution_at(t), p, std::exp(eq_log), std::exp(bd_log));
            out.wealth_by_year[static_cast<std::size_t>(t) + 1].push_back(w);
        }
    }
    return out;
}

} // namespace tdf
