#pragma once

#include <string>
#include <variant>
#include <vector>

#include "tdf/errors.hpp"

namespace tdf {

// Accumulation scenario: T years, annual rebalancing, a contribution of c
// real dollars injected at each date in contribution_times (default
// {0..T-1}). All wealth is real dollars.
struct Scenario {
    int horizon_years = 30;
    double initial_wealth = 10000.0;
    double annual_contribution = 10000.0;
    double rebalance_interval = 1.0;       // years
    std::vector<int> contribution_times;   // empty means {0..T-1}

    void validate() const;
    int n_periods() const { return horizon_years; }
    bool contributes_at(int t) const;
    double contribution_at(int t) const {
        return contributes_at(t) ? annual_contribution : 0.0;
    }
};

// The three strategy representations. Equity fractions always in [0,1].
struct ConstantStrategy {
    double p;
};
struct GlideStrategy {
    std::vector<double> fractions; // one per rebalance date, 0..T-1
};
struct AdaptiveStrategyRef {
    std::string policy_path; // PolicyGrid file; resolved by the caller
};

using Strategy = std::variant<ConstantStrategy, GlideStrategy, AdaptiveStrategyRef>;

void validate_strategy(const Strategy& s, const Scenario& scenario);
std::string strategy_kind(const Strategy& s);

// p(age) = (110 - age) / 100, clamped to [0,1].
double age_based_fraction(double age_years);

// One rebalance period: inject, rebalance to p, accrue returns.
inline double step_wealth(double wealth, double contribution, double p,
                          double equity_gross, double bond_gross) {
    return (wealth + contribution) * (p * equity_gross + (1.0 - p) * bond_gross);
}

} // namespace tdf
