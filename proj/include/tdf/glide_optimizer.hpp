#pragma once

#include <vector>

#include "tdf/jump_model.hpp"
#include "tdf/strategy.hpp"

namespace tdf {

// One-period moments shared by the moment recursion and the optimizer.
struct PeriodMoments {
    double e_mu; // E[equity gross]
    double e_m2; // E[equity gross^2]
    double b;    // bond gross (deterministic)

    void validate() const;
    static PeriodMoments from_kou(const KouParams& p, double dt_years);
};

struct WealthMoments {
    double mean;
    double second_moment;
    double std; // sqrt(max(0, m2 - mean^2))
};

// Exact first two moments of terminal wealth under a deterministic glide:
// independent periods, m1 <- (m1 + c_t) E[G_t], m2 <- (m2 + 2 c_t m1_prev
// + c_t^2) E[G_t^2] with G_t = p_t R_e + (1 - p_t) b.
WealthMoments wealth_moments(const std::vector<double>& glide, const Scenario& scenario,
                             const PeriodMoments& pm);

struct GlideOptimum {
    std::vector<double> glide;
    double mean;
    double std;
    int best_start; // index into the documented start list
};

// Minimises std[W_T] over glides in [0,1]^T subject to E[W_T] =
// target_mean. Augmented-Lagrangian outer loop around projected gradient
// with adjoint gradients of the moment recursion; starts from the
// mean-matched constant glide, an equity-to-bond ramp and a bond-to-equity
// ramp; every candidate is re-projected onto the mean constraint before
// the best start is picked. Raises infeasible_target when target_mean is
// outside [all-bond mean, all-equity mean].
GlideOptimum optimize_glide(const Scenario& scenario, const PeriodMoments& pm,
                            double target_mean);

} // namespace tdf
