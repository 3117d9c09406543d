#include "tdf/adaptive_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "tdf/numerics.hpp"
#include "tdf/serialize.hpp"
#include "tdf/simulation.hpp"

namespace tdf {

double bond_only_continuation(const Scenario& scenario, double bond_gross, int t, double w) {
    double x = w;
    for (int s = t; s < scenario.n_periods(); ++s)
        x = (x + scenario.contribution_at(s)) * bond_gross;
    return x;
}

double policy_lookup(const PolicyGrid& grid, double wealth, double t_years) {
    for (std::size_t i = 0; i < grid.times.size(); ++i) {
        if (std::fabs(grid.times[i] - t_years) <= 1e-9)
            return lerp_clamped(grid.wealth_nodes, grid.policy[i], wealth);
    }
    raise(Errc::unknown_time, "no rebalance date at t = " + std::to_string(t_years));
}

namespace {

// Wealth grid: node 0, log-spaced nodes from W0/100 to w_max, a uniform
// band around the target where the value kink lives, the deterministic
// all-bond trajectory from W0 (so the zero-risk fixed point sits exactly
// on nodes), and W* itself.
std::vector<double> build_wealth_grid(const Scenario& scn, double w_star, double bond_gross,
                                      const GridConfig& cfg) {
    const double w_max = cfg.w_max_multiple * w_star;
    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(cfg.n_wealth_nodes + cfg.n_kink_nodes) + 40);
    nodes.push_back(0.0);

    const double w_min = std::max(scn.initial_wealth / 100.0, w_max * 1e-7);
    const int n_log = cfg.n_wealth_nodes - 1;
    const double ratio = std::log(w_max / w_min) / static_cast<double>(n_log - 1);
    for (int i = 0; i < n_log; ++i) nodes.push_back(w_min * std::exp(ratio * i));

    const double band_lo = 0.5 * w_star, band_hi = std::min(1.5 * w_star, w_max);
    for (int i = 0; i <= cfg.n_kink_nodes; ++i)
        nodes.push_back(band_lo + (band_hi - band_lo) * i / cfg.n_kink_nodes);
    nodes.push_back(w_star);

    double w = scn.initial_wealth; // pre-injection wealth along the bond path
    for (int t = 0; t < scn.n_periods(); ++t) {
        if (w <= w_max) nodes.push_back(w);
        w = (w + scn.contribution_at(t)) * bond_gross;
    }

    std::sort(nodes.begin(), nodes.end());
    std::vector<double> dedup;
    dedup.reserve(nodes.size());
    for (double x : nodes)
        if (dedup.empty() || x > dedup.back() * (1.0 + 1e-12) + 1e-9) dedup.push_back(x);
    return dedup;
}

struct ExpectationContext {
    std::span<const double> nodes;
    std::span<const double> v_next;
    std::span<const double> quad_r; // ascending gross returns
    std::span<const double> quad_w;
    double bond_gross;
};

// E[V((w+c) * (p R + (1-p) B))] by marching the interpolation bracket along
// the ascending quadrature targets. Mass mapping beyond the last node is
// clamped there and reported.
double expected_value(const ExpectationContext& ctx, double g, double p, double* lost_mass) {
    const std::size_t n = ctx.nodes.size();
    const double w_top = ctx.nodes[n - 1];
    double acc = 0.0, lost = 0.0;
    std::size_t j = 0;
    for (std::size_t k = 0; k < ctx.quad_r.size(); ++k) {
        const double target = g * (ctx.bond_gross + p * (ctx.quad_r[k] - ctx.bond_gross));
        if (target >= w_top) {
            acc += ctx.quad_w[k] * ctx.v_next[n - 1];
            lost += ctx.quad_w[k];
            continue;
        }
        while (j + 2 < n && ctx.nodes[j + 1] <= target) ++j;
        const double frac = (target - ctx.nodes[j]) / (ctx.nodes[j + 1] - ctx.nodes[j]);
        acc += ctx.quad_w[k] * (ctx.v_next[j] + frac * (ctx.v_next[j + 1] - ctx.v_next[j]));
    }
    if (lost_mass) *lost_mass = lost;
    return acc;
}

} // namespace

PolicyGrid solve_policy(const KouParams& params, const Scenario& scenario, double w_star,
                        const GridConfig& cfg) {
    params.validate();
    scenario.validate();
    require(w_star > 0.0, Errc::parameter_out_of_domain, "W* must be positive");
    require(cfg.w_max_multiple >= 8.0, Errc::bad_config, "grid must extend to at least 8 W*");
    require(cfg.n_controls >= 2 && cfg.n_wealth_nodes >= 16, Errc::bad_config,
            "grid configuration too coarse");

    const double dt = scenario.rebalance_interval;
    const int T = scenario.n_periods();
    const double bond_gross = std::exp(params.r * dt);
    const DiscreteReturnDistribution quad =
        period_return_quadrature(params, dt, cfg.n_quad_nodes);
    const double e_mu = gross_mean(params, dt);
    // The de-risking pin requires a positive equity premium; without one
    // equity is dominated and the scan lands on p = 0 anyway.
    const bool pin_overshoot = e_mu > bond_gross;

    PolicyGrid grid;
    grid.w_star = w_star;
    grid.params_hash = hash_hex(kou_params_to_json(params).dump());
    grid.wealth_nodes = build_wealth_grid(scenario, w_star, bond_gross, cfg);
    grid.times.resize(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) grid.times[static_cast<std::size_t>(t)] = t * dt;

    const std::size_t n_nodes = grid.wealth_nodes.size();
    grid.policy.assign(static_cast<std::size_t>(T), std::vector<double>(n_nodes, 0.0));
    grid.value.assign(static_cast<std::size_t>(T), std::vector<double>(n_nodes, 0.0));

    std::vector<double> v_next(n_nodes), v_cur(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        const double d = grid.wealth_nodes[i] - w_star;
        v_next[i] = d * d;
    }

    const double dp = 1.0 / static_cast<double>(cfg.n_controls - 1);
    std::vector<double> lost_by_node(n_nodes, 0.0);
    double worst_lost = 0.0;

    for (int t = T - 1; t >= 0; --t) {
        const double c_t = scenario.contribution_at(t);
        const ExpectationContext ctx{grid.wealth_nodes, v_next, quad.gross_returns, quad.weights,
                                     bond_gross};
        auto& policy_t = grid.policy[static_cast<std::size_t>(t)];
        auto& value_t = grid.value[static_cast<std::size_t>(t)];

        parallel_for(n_nodes, [&](std::size_t i) {
            const double w = grid.wealth_nodes[i];
            const double g = w + c_t;
            lost_by_node[i] = 0.0;

            const double bond_terminal = bond_only_continuation(scenario, bond_gross, t, w);
            if (pin_overshoot && bond_terminal >= w_star) {
                // Risk would only push the mean further past the target and
                // add variance; the bond continuation is exactly optimal.
                policy_t[i] = 0.0;
                const double d = bond_terminal - w_star;
                value_t[i] = d * d;
                return;
            }

            double best_p = 0.0;
            double best_val = std::numeric_limits<double>::infinity();
            for (int m = 0; m < cfg.n_controls; ++m) {
                const double p = dp * static_cast<double>(m);
                const double val = expected_value(ctx, g, p, nullptr);
                if (val < best_val) {
                    best_val = val;
                    best_p = p;
                }
            }
            // one golden-section pass around the discrete argmin; keep the
            // smallest p among equal minimizers
            const double lo = std::max(0.0, best_p - dp), hi = std::min(1.0, best_p + dp);
            const double p_ref = golden_section_min(
                [&](double p) { return expected_value(ctx, g, p, nullptr); }, lo, hi, 32);
            const double val_ref = expected_value(ctx, g, p_ref, nullptr);
            if (val_ref < best_val || (val_ref == best_val && p_ref < best_p)) {
                best_val = val_ref;
                best_p = p_ref;
            }
            value_t[i] = expected_value(ctx, g, best_p, &lost_by_node[i]);
            policy_t[i] = best_p;
        });

        // Localization error is measured where the optimal process lives
        // (nodes at or below the target).
        for (std::size_t i = 0; i < n_nodes; ++i)
            if (grid.wealth_nodes[i] <= w_star) worst_lost = std::max(worst_lost, lost_by_node[i]);
        if (worst_lost > cfg.lost_mass_cap)
            raise(Errc::grid_too_small,
                  "clamped quadrature mass " + std::to_string(worst_lost) + " at t = " +
                      std::to_string(t) + "; enlarge w_max_multiple");

        v_next = value_t;
    }
    grid.lost_mass = worst_lost;
    return grid;
}

CalibratedPolicy calibrate_target(const KouParams& params, const Scenario& scenario,
                                  double goal_mean, const McConfig& mc, const GridConfig& cfg) {
    params.validate();
    scenario.validate();
    const double dt = scenario.rebalance_interval;
    const double bond_gross = std::exp(params.r * dt);
    const double all_bond = bond_only_continuation(scenario, bond_gross, 0, scenario.initial_wealth);
    require(goal_mean >= all_bond * (1.0 - 1e-12), Errc::infeasible_goal,
            "goal mean " + std::to_string(goal_mean) + " below the all-bond terminal wealth " +
                std::to_string(all_bond));

    struct Eval {
        double mean;
        double se;
        PolicyGrid grid;
    };
    int iterations = 0;
    auto evaluate = [&](double w_star) -> Eval {
        ++iterations;
        Eval e;
        e.grid = solve_policy(params, scenario, w_star, cfg);
        BoundStrategy bound{AdaptiveStrategyRef{}, &e.grid};
        const McResult res = run_monte_carlo(bound, scenario, params, mc.n_paths, mc.seed);
        const MeanStd ms = mean_std(res.terminal_wealth);
        e.mean = ms.mean;
        e.se = ms.std / std::sqrt(static_cast<double>(ms.n));
        return e;
    };
    auto within_tol = [&](const Eval& e) {
        return std::fabs(e.mean - goal_mean) <= std::max(mc.rel_tol * goal_mean, 2.0 * e.se);
    };

    // The map w_star -> E[W_T] is monotone; start at the goal itself, which
    // is exact at the zero-risk fixed point, then bracket upward.
    Eval lo_eval = evaluate(goal_mean);
    if (within_tol(lo_eval))
        return {goal_mean, std::move(lo_eval.grid), lo_eval.mean, iterations};

    double lo = goal_mean, hi = goal_mean;
    Eval hi_eval = lo_eval;
    if (lo_eval.mean > goal_mean) {
        // The optimal policy keeps E[W_T] below W*; if noise ever puts the
        // first evaluation above the goal, walk the lower bracket down.
        while (lo_eval.mean > goal_mean && lo > all_bond) {
            require(iterations < mc.max_iters, Errc::no_convergence,
                    "bracketing exceeded the iteration cap");
            lo = std::max(all_bond, 0.9 * lo);
            lo_eval = evaluate(lo);
            if (within_tol(lo_eval))
                return {lo, std::move(lo_eval.grid), lo_eval.mean, iterations};
        }
    } else {
        while (hi_eval.mean < goal_mean) {
            require(iterations < mc.max_iters, Errc::no_convergence,
                    "bracketing exceeded the iteration cap");
            require(hi < 64.0 * goal_mean, Errc::no_convergence,
                    "goal mean appears unreachable (target grew past 64x goal)");
            lo = hi;
            lo_eval = hi_eval;
            hi *= 1.35;
            hi_eval = evaluate(hi);
            if (within_tol(hi_eval))
                return {hi, std::move(hi_eval.grid), hi_eval.mean, iterations};
        }
    }

    // Safeguarded secant on the bracket.
    while (iterations < mc.max_iters) {
        double w_next;
        const double denom = hi_eval.mean - lo_eval.mean;
        if (denom > 0.0)
            w_next = lo + (goal_mean - lo_eval.mean) * (hi - lo) / denom;
        else
            w_next = 0.5 * (lo + hi);
        const double margin = 0.02 * (hi - lo);
        w_next = std::clamp(w_next, lo + margin, hi - margin);

        Eval mid = evaluate(w_next);
        if (within_tol(mid)) return {w_next, std::move(mid.grid), mid.mean, iterations};
        if (mid.mean < goal_mean) {
            lo = w_next;
            lo_eval = std::move(mid);
        } else {
            hi = w_next;
            hi_eval = std::move(mid);
        }
    }
    raise(Errc::no_convergence, "calibration did not reach the goal mean in " +
                                    std::to_string(mc.max_iters) + " evaluations");
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

void PolicyGrid::save_json(const std::string& path, const std::string& provenance_json) const {
    nlohmann::json j;
    j["format"] = "tdf-policy-v1";
    j["w_star"] = w_star;
    j["params_hash"] = params_hash;
    j["lost_mass"] = lost_mass;
    j["times"] = times;
    j["wealth_nodes"] = wealth_nodes;
    j["policy"] = policy;
    j["value"] = value;
    if (!provenance_json.empty()) j["provenance"] = nlohmann::json::parse(provenance_json);
    write_text_file(path, j.dump(2) + "\n");
}

PolicyGrid PolicyGrid::load_json(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::io_error, path + ": " + e.what());
    }
    try {
        require(j.at("format") == "tdf-policy-v1", Errc::bad_config,
                path + ": unknown policy format");
        PolicyGrid g;
        g.w_star = j.at("w_star").get<double>();
        g.params_hash = j.value("params_hash", "");
        g.lost_mass = j.value("lost_mass", 0.0);
        g.times = j.at("times").get<std::vector<double>>();
        g.wealth_nodes = j.at("wealth_nodes").get<std::vector<double>>();
        g.policy = j.at("policy").get<std::vector<std::vector<double>>>();
        g.value = j.at("value").get<std::vector<std::vector<double>>>();
        require(g.policy.size() == g.times.size() && g.value.size() == g.times.size(),
                Errc::bad_config, path + ": matrix shape mismatch");
        return g;
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::bad_config, path + ": " + e.what());
    }
}

} // namespace tdf
