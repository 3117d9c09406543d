#include "tdf/strategy.hpp"

#include <algorithm>
#include <cmath>

namespace tdf {

void Scenario::validate() const {
    require(horizon_years > 0, Errc::bad_config, "horizon must be > 0");
    require(initial_wealth >= 0.0, Errc::bad_config, "initial wealth must be >= 0");
    require(annual_contribution >= 0.0, Errc::bad_config, "contribution must be >= 0");
    require(rebalance_interval > 0.0, Errc::bad_config, "rebalance interval must be > 0");
    for (int t : contribution_times)
        require(t >= 0 && t < horizon_years, Errc::bad_config,
                "contribution time " + std::to_string(t) + " outside [0, T)");
}

bool Scenario::contributes_at(int t) const {
    if (contribution_times.empty()) return t >= 0 && t < horizon_years;
    return std::find(contribution_times.begin(), contribution_times.end(), t) !=
           contribution_times.end();
}

void validate_strategy(const Strategy& s, const Scenario& scenario) {
    if (const auto* c = std::get_if<ConstantStrategy>(&s)) {
        require(c->p >= 0.0 && c->p <= 1.0, Errc::bad_config, "constant fraction outside [0,1]");
    } else if (const auto* g = std::get_if<GlideStrategy>(&s)) {
        require(static_cast<int>(g->fractions.size()) == scenario.n_periods(), Errc::bad_config,
                "glide length " + std::to_string(g->fractions.size()) + " != horizon " +
                    std::to_string(scenario.n_periods()));
        for (double p : g->fractions)
            require(p >= 0.0 && p <= 1.0, Errc::bad_config, "glide fraction outside [0,1]");
    }
}

std::string strategy_kind(const Strategy& s) {
    if (std::holds_alternative<ConstantStrategy>(s)) return "constant";
    if (std::holds_alternative<GlideStrategy>(s)) return "glide";
    return "adaptive";
}

double age_based_fraction(double age_years) {
    require(age_years >= 0.0, Errc::bad_config, "age must be >= 0");
    return std::clamp((110.0 - age_years) / 100.0, 0.0, 1.0);
}

} // namespace tdf
