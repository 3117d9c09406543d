#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tdf/jump_model.hpp"
#include "tdf/strategy.hpp"

namespace tdf {

struct GridConfig {
    int n_wealth_nodes = 512;   // log-spaced base grid
    int n_kink_nodes = 128;     // extra uniform nodes in [0.5, 1.5] * W*
    double w_max_multiple = 10; // w_max = multiple * W*
    int n_controls = 201;       // p in {0, 1/200, ..., 1}
    int n_quad_nodes = 512;     // period_return_quadrature nodes
    double lost_mass_cap = 1e-5;
};

// Optimal equity fraction and value surface on a wealth x time grid,
// the output of backward induction on the quadratic target objective.
struct PolicyGrid {
    std::vector<double> times;               // rebalance dates 0..T-1, years
    std::vector<double> wealth_nodes;        // strictly increasing, node 0 first
    std::vector<std::vector<double>> policy; // [time][node], in [0,1]
    std::vector<std::vector<double>> value;  // [time][node], >= 0
    double w_star = 0.0;
    std::string params_hash;    // FNV-1a hex of the generating KouParams JSON
    double lost_mass = 0.0;     // worst clamped quadrature mass, nodes <= W*

    void save_json(const std::string& path, const std::string& provenance_json = "") const;
    static PolicyGrid load_json(const std::string& path);
};

// Piecewise-linear interpolation of policy in wealth at a stored
// rebalance date, clamped to the edge nodes outside the grid.
double policy_lookup(const PolicyGrid& grid, double wealth, double t_years);

// Deterministic terminal wealth when everything from (w at date t) onward
// sits in the bond: compound w + c_t and the remaining contributions at
// bond_gross per period. Shared by the solver, the calibrator and tests so
// the de-risking comparisons are bit-identical.
double bond_only_continuation(const Scenario& scenario, double bond_gross, int t, double w);

// Backward dynamic programming for min E[(W_T - W*)^2]:
// terminal value (w - W*)^2; at each earlier date the expectation runs
// over period_return_quadrature nodes with linear interpolation of the
// continuation value; controls scanned on a uniform grid then refined by
// one golden section pass; ties take the smallest p. Nodes whose bond-only
// continuation already reaches W* are pinned to p = 0 (any risk raises
// both the variance and the overshoot). Raises grid_too_small when
// clamped quadrature mass over nodes <= W* exceeds cfg.lost_mass_cap.
PolicyGrid solve_policy(const KouParams& params, const Scenario& scenario, double w_star,
                        const GridConfig& cfg = {});

struct McConfig {
    std::size_t n_paths = 200000;
    std::uint64_t seed = 1;
    double rel_tol = 0.0025; // on the goal mean
    int max_iters = 50;
};

struct CalibratedPolicy {
    double w_star;
    PolicyGrid grid;
    double achieved_mean; // Monte Carlo estimate at w_star
    int iterations;
};

// Finds W* with E[W_T | optimal policy for W*] = goal_mean by bracketing
// plus secant iteration on the monotone map, Monte Carlo mean with a fixed
// seed (common random numbers across iterations). Terminates when the
// mean is within max(rel_tol * goal, 2 MC standard errors).
CalibratedPolicy calibrate_target(const KouParams& params, const Scenario& scenario,
                                  double goal_mean, const McConfig& mc = {},
                                  const GridConfig& cfg = {});

} // namespace tdf
