#include "tdf/glide_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tdf {

void PeriodMoments::validate() const {
    require(e_mu > 0.0 && e_m2 > 0.0 && b > 0.0, Errc::parameter_out_of_domain,
            "period moments must be positive");
    require(e_m2 >= e_mu * e_mu * (1.0 - 1e-12), Errc::parameter_out_of_domain,
            "E[G^2] < E[G]^2 violates Jensen");
}

PeriodMoments PeriodMoments::from_kou(const KouParams& p, double dt) {
    PeriodMoments pm;
    pm.e_mu = gross_mean(p, dt);
    pm.e_m2 = gross_second_moment(p, dt);
    pm.b = std::exp(p.r * dt);
    pm.validate();
    return pm;
}

namespace {

double period_mean(double p, const PeriodMoments& pm) {
    return p * pm.e_mu + (1.0 - p) * pm.b;
}

double period_second(double p, const PeriodMoments& pm) {
    return p * p * pm.e_m2 + 2.0 * p * (1.0 - p) * pm.e_mu * pm.b +
           (1.0 - p) * (1.0 - p) * pm.b * pm.b;
}

struct Forward {
    std::vector<double> m1; // m1[t], t = 0..T
    std::vector<double> m2;
};

Forward forward_moments(const std::vector<double>& glide, const Scenario& scn,
                        const PeriodMoments& pm, double scale) {
    const int T = scn.n_periods();
    Forward fw;
    fw.m1.resize(static_cast<std::size_t>(T) + 1);
    fw.m2.resize(static_cast<std::size_t>(T) + 1);
    fw.m1[0] = scn.initial_wealth * scale;
    fw.m2[0] = fw.m1[0] * fw.m1[0];
    for (int t = 0; t < T; ++t) {
        const double c = scn.contribution_at(t) * scale;
        const double g = period_mean(glide[static_cast<std::size_t>(t)], pm);
        const double h = period_second(glide[static_cast<std::size_t>(t)], pm);
        const std::size_t i = static_cast<std::size_t>(t);
        fw.m1[i + 1] = (fw.m1[i] + c) * g;
        fw.m2[i + 1] = (fw.m2[i] + 2.0 * c * fw.m1[i] + c * c) * h;
    }
    return fw;
}

// Adjoint of the recursion for F = w1 * m1_T + w2 * m2_T composed with any
// outer function via (w1, w2) seeds; returns dF/dp_t.
std::vector<double> adjoint_gradient(const std::vector<double>& glide, const Scenario& scn,
                                     const PeriodMoments& pm, double scale, const Forward& fw,
                                     double seed_m1, double seed_m2) {
    const int T = scn.n_periods();
    std::vector<double> grad(static_cast<std::size_t>(T));
    double l1 = seed_m1, l2 = seed_m2;
    const double dg = pm.e_mu - pm.b;
    for (int t = T - 1; t >= 0; --t) {
        const std::size_t i = static_cast<std::size_t>(t);
        const double p = glide[i];
        const double c = scn.contribution_at(t) * scale;
        const double g = period_mean(p, pm);
        const double h = period_second(p, pm);
        const double dh = 2.0 * (p * (pm.e_m2 - 2.0 * pm.e_mu * pm.b + pm.b * pm.b) +
                                 (pm.e_mu * pm.b - pm.b * pm.b));
        grad[i] = l1 * (fw.m1[i] + c) * dg + l2 * (fw.m2[i] + 2.0 * c * fw.m1[i] + c * c) * dh;
        const double l1_next = l1 * g + l2 * 2.0 * c * h;
        l2 *= h;
        l1 = l1_next;
    }
    return grad;
}

struct Objective {
    const Scenario& scn;
    const PeriodMoments& pm;
    double scale; // dollars -> units of target mean

    double mean(const std::vector<double>& p) const {
        return forward_moments(p, scn, pm, scale).m1.back();
    }
    double variance(const std::vector<double>& p) const {
        const Forward fw = forward_moments(p, scn, pm, scale);
        return fw.m2.back() - fw.m1.back() * fw.m1.back();
    }
};

// Uniform clamped shift onto the mean constraint; the shifted mean is
// monotone in delta while any coordinate is unclamped.
std::vector<double> project_to_mean(std::vector<double> glide, const Objective& obj,
                                    double target, bool increasing) {
    auto shifted = [&](double delta) {
        std::vector<double> q(glide.size());
        for (std::size_t i = 0; i < glide.size(); ++i)
            q[i] = std::clamp(glide[i] + delta, 0.0, 1.0);
        return q;
    };
    double lo = -1.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double m = obj.mean(shifted(mid));
        if ((m < target) == increasing)
            lo = mid;
        else
            hi = mid;
    }
    return shifted(0.5 * (lo + hi));
}

struct Candidate {
    std::vector<double> glide;
    double std = std::numeric_limits<double>::infinity();
    double mean = 0.0;
};

Candidate finish(std::vector<double> glide, const Objective& obj, double target, bool increasing) {
    Candidate c;
    c.glide = project_to_mean(std::move(glide), obj, target, increasing);
    const Forward fw = forward_moments(c.glide, obj.scn, obj.pm, obj.scale);
    c.mean = fw.m1.back();
    c.std = std::sqrt(std::max(0.0, fw.m2.back() - c.mean * c.mean));
    return c;
}

// Augmented-Lagrangian outer loop around projected gradient descent.
std::vector<double> augmented_lagrangian(std::vector<double> p, const Objective& obj,
                                         double target) {
    const std::size_t T = p.size();
    double mu_mult = 0.0;
    double rho = 10.0;
    int inner_budget = 10000;
    double prev_abs_c = std::numeric_limits<double>::infinity();

    for (int outer = 0; outer < 60 && inner_budget > 0; ++outer) {
        auto lagrangian = [&](const std::vector<double>& q, Forward& fw_out) {
            fw_out = forward_moments(q, obj.scn, obj.pm, obj.scale);
            const double m1 = fw_out.m1.back();
            const double var = fw_out.m2.back() - m1 * m1;
            const double c = m1 - target;
            return var + mu_mult * c + 0.5 * rho * c * c;
        };

        double step = 0.1;
        Forward fw;
        double f_cur = lagrangian(p, fw);
        for (int it = 0; it < 400 && inner_budget > 0; ++it, --inner_budget) {
            const double m1 = fw.m1.back();
            const double c = m1 - target;
            // dL/dp = dVar + (mu + rho*c) * dC, with dVar = d(m2) - 2 m1 d(m1)
            std::vector<double> grad =
                adjoint_gradient(p, obj.scn, obj.pm, obj.scale, fw, -2.0 * m1, 1.0);
            const std::vector<double> gc =
                adjoint_gradient(p, obj.scn, obj.pm, obj.scale, fw, 1.0, 0.0);
            const double w = mu_mult + rho * c;
            for (std::size_t i = 0; i < T; ++i) grad[i] += w * gc[i];

            // projected-gradient stationarity measure
            double pg_norm = 0.0;
            for (std::size_t i = 0; i < T; ++i) {
                const double moved = std::clamp(p[i] - grad[i], 0.0, 1.0) - p[i];
                pg_norm = std::max(pg_norm, std::fabs(moved));
            }
            if (pg_norm <= 1e-8) break;

            bool accepted = false;
            for (int bt = 0; bt < 40; ++bt) {
                std::vector<double> q(T);
                double sq_move = 0.0;
                for (std::size_t i = 0; i < T; ++i) {
                    q[i] = std::clamp(p[i] - step * grad[i], 0.0, 1.0);
                    const double d = q[i] - p[i];
                    sq_move += d * d;
                }
                if (sq_move == 0.0) break;
                Forward fw_q;
                const double f_q = lagrangian(q, fw_q);
                if (f_q <= f_cur - 1e-4 / std::max(step, 1e-12) * sq_move) {
                    p = std::move(q);
                    fw = std::move(fw_q);
                    f_cur = f_q;
                    step = std::min(step * 2.0, 1e6);
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;
        }

        const double c = forward_moments(p, obj.scn, obj.pm, obj.scale).m1.back() - target;
        if (std::fabs(c) <= 1e-8) break;
        mu_mult += rho * c;
        if (std::fabs(c) > 0.25 * prev_abs_c) rho *= 10.0;
        prev_abs_c = std::fabs(c);
    }
    return p;
}

} // namespace

WealthMoments wealth_moments(const std::vector<double>& glide, const Scenario& scenario,
                             const PeriodMoments& pm) {
    scenario.validate();
    pm.validate();
    require(static_cast<int>(glide.size()) == scenario.n_periods(), Errc::bad_config,
            "glide length must equal the number of periods");
    for (double p : glide)
        require(p >= 0.0 && p <= 1.0, Errc::bad_config, "glide entry outside [0,1]");
    const Forward fw = forward_moments(glide, scenario, pm, 1.0);
    WealthMoments out;
    out.mean = fw.m1.back();
    out.second_moment = fw.m2.back();
    out.std = std::sqrt(std::max(0.0, out.second_moment - out.mean * out.mean));
    return out;
}

GlideOptimum optimize_glide(const Scenario& scenario, const PeriodMoments& pm,
                            double target_mean) {
    scenario.validate();
    pm.validate();
    require(target_mean > 0.0, Errc::infeasible_target, "target mean must be positive");
    const int T = scenario.n_periods();
    const std::size_t n = static_cast<std::size_t>(T);

    const Objective obj{scenario, pm, 1.0 / target_mean};
    const double target = 1.0; // normalized

    const double mean_bond = obj.mean(std::vector<double>(n, 0.0));
    const double mean_equity = obj.mean(std::vector<double>(n, 1.0));
    const double lo = std::min(mean_bond, mean_equity);
    const double hi = std::max(mean_bond, mean_equity);
    require(target >= lo * (1.0 - 1e-12) && target <= hi * (1.0 + 1e-12), Errc::infeasible_target,
            "target mean outside the achievable [all-bond, all-equity] range");
    const bool increasing = mean_equity >= mean_bond;

    // Documented start list. Start 0 doubles as the constant-proportion
    // benchmark the optimum must never fall behind.
    std::vector<std::vector<double>> starts;
    starts.push_back(project_to_mean(std::vector<double>(n, 0.5), obj, target, increasing));
    std::vector<double> ramp_down(n), ramp_up(n);
    for (int t = 0; t < T; ++t) {
        const double frac = T > 1 ? static_cast<double>(t) / static_cast<double>(T - 1) : 0.5;
        ramp_down[static_cast<std::size_t>(t)] = 1.0 - frac;
        ramp_up[static_cast<std::size_t>(t)] = frac;
    }
    starts.push_back(ramp_down);
    starts.push_back(ramp_up);

    Candidate best;
    int best_start = -1;
    // The mean-matched constant itself is the fallback candidate.
    const Candidate benchmark = finish(starts[0], obj, target, increasing);
    for (std::size_t s = 0; s < starts.size(); ++s) {
        const Candidate cand =
            finish(augmented_lagrangian(starts[s], obj, target), obj, target, increasing);
        if (cand.std < best.std * (1.0 - 1e-12)) {
            best = cand;
            best_start = static_cast<int>(s);
        }
    }
    if (best_start < 0 || benchmark.std < best.std) {
        best = benchmark;
        best_start = 0;
    }

    GlideOptimum out;
    out.glide = best.glide;
    out.mean = best.mean * target_mean;
    out.std = best.std * target_mean;
    out.best_start = best_start;
    return out;
}

} // namespace tdf
