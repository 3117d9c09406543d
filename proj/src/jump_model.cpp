#include "tdf/jump_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <iterator>
#include <limits>
#include <numbers>

#include "tdf/numerics.hpp"
#include "tdf/rng.hpp"

namespace tdf {

namespace {
constexpr double kPi = std::numbers::pi;

// Raw moments of the double-exponential jump size Y.
double jump_mean(const KouParams& p) { return p.p_up / p.eta1 - (1.0 - p.p_up) / p.eta2; }
double jump_m2(const KouParams& p) {
    return 2.0 * p.p_up / (p.eta1 * p.eta1) + 2.0 * (1.0 - p.p_up) / (p.eta2 * p.eta2);
}
double jump_m4(const KouParams& p) {
    const double e1_2 = p.eta1 * p.eta1, e2_2 = p.eta2 * p.eta2;
    return 24.0 * p.p_up / (e1_2 * e1_2) + 24.0 * (1.0 - p.p_up) / (e2_2 * e2_2);
}
} // namespace

void KouParams::validate() const {
    require(std::isfinite(mu), Errc::parameter_out_of_domain, "mu must be finite");
    require(sigma > 0.0, Errc::parameter_out_of_domain, "sigma must be > 0");
    require(lambda >= 0.0, Errc::parameter_out_of_domain, "lambda must be >= 0");
    require(p_up >= 0.0 && p_up <= 1.0, Errc::parameter_out_of_domain, "p_up must be in [0,1]");
    require(eta1 > 2.0, Errc::parameter_out_of_domain, "eta1 must be > 2");
    require(eta2 > 0.0, Errc::parameter_out_of_domain, "eta2 must be > 0");
}

JumpExpMoments jump_exp_moments(const KouParams& p) {
    p.validate();
    JumpExpMoments m;
    m.m1 = p.p_up * p.eta1 / (p.eta1 - 1.0) + (1.0 - p.p_up) * p.eta2 / (p.eta2 + 1.0);
    m.m2 = p.p_up * p.eta1 / (p.eta1 - 2.0) + (1.0 - p.p_up) * p.eta2 / (p.eta2 + 2.0);
    m.kappa = m.m1 - 1.0;
    return m;
}

double log_drift(const KouParams& p) {
    return p.mu - 0.5 * p.sigma * p.sigma - p.lambda * jump_exp_moments(p).kappa;
}

double gross_mean(const KouParams& p, double dt) { return std::exp(p.mu * dt); }

double gross_second_moment(const KouParams& p, double dt) {
    const JumpExpMoments jm = jump_exp_moments(p);
    return std::exp((2.0 * p.mu + p.sigma * p.sigma + p.lambda * (jm.m2 - 2.0 * jm.m1 + 1.0)) * dt);
}

// ---------------------------------------------------------------------------
// COS density
// ---------------------------------------------------------------------------

KouDensity::KouDensity(const KouParams& p, double dt) {
    p.validate();
    require(dt > 0.0, Errc::parameter_out_of_domain, "dt must be > 0");

    const double a_drift = log_drift(p);
    const double ey = jump_mean(p), ey2 = jump_m2(p), ey4 = jump_m4(p);

    // Truncation range from the cumulants: c1 +/- L*sqrt(c2 + sqrt(c4)).
    const double c1 = a_drift * dt + p.lambda * dt * ey;
    const double c2 = dt * (p.sigma * p.sigma + p.lambda * ey2);
    const double c4 = dt * p.lambda * ey4;
    const double width = 10.0 * std::sqrt(c2 + std::sqrt(c4));
    x_lo_ = c1 - width;
    x_hi_ = c1 + width;

    // The cosine coefficients decay with the Gaussian factor
    // exp(-dt sigma^2 u^2 / 2); keep terms until it is below ~1e-26.
    const double sig_sqdt = std::max(p.sigma, 1e-4) * std::sqrt(dt);
    const double u_max = 11.0 / sig_sqdt;
    int n = 256;
    while (n < u_max * (x_hi_ - x_lo_) / kPi && n < 65536) n *= 2;

    const double span = x_hi_ - x_lo_;
    coeff_.resize(static_cast<std::size_t>(n));
    const std::complex<double> i1(0.0, 1.0);
    for (int k = 0; k < n; ++k) {
        const double u = static_cast<double>(k) * kPi / span;
        const std::complex<double> phi_y =
            p.p_up * p.eta1 / (p.eta1 - i1 * u) + (1.0 - p.p_up) * p.eta2 / (p.eta2 + i1 * u);
        const std::complex<double> exponent =
            dt * (i1 * u * a_drift - 0.5 * p.sigma * p.sigma * u * u +
                  p.lambda * (phi_y - 1.0)) -
            i1 * u * x_lo_;
        coeff_[static_cast<std::size_t>(k)] = (2.0 / span) * std::exp(exponent).real();
    }
    coeff_[0] *= 0.5;
}

double KouDensity::operator()(double x) const {
    if (x < x_lo_ || x > x_hi_) return 0.0;
    const double theta = kPi * (x - x_lo_) / (x_hi_ - x_lo_);
    // f = sum_k coeff[k] * cos(k*theta) via the two-term recurrence.
    const double c = std::cos(theta);
    double tk_prev = 1.0, tk = c;
    double acc = coeff_[0] + coeff_[1] * c;
    for (std::size_t k = 2; k < coeff_.size(); ++k) {
        const double tk_next = 2.0 * c * tk - tk_prev;
        tk_prev = tk;
        tk = tk_next;
        acc += coeff_[k] * tk;
    }
    return std::max(acc, 0.0);
}

KouDensity::Table KouDensity::table(int n_points) const {
    Table t;
    t.x_lo = x_lo_;
    t.dx = (x_hi_ - x_lo_) / static_cast<double>(n_points - 1);
    t.f.resize(static_cast<std::size_t>(n_points));
    const std::size_t n_terms = coeff_.size();
    const double dtheta = kPi / static_cast<double>(n_points - 1);
    for (int j = 0; j < n_points; ++j) {
        const double c = std::cos(dtheta * static_cast<double>(j));
        double tk_prev = 1.0, tk = c;
        double acc = coeff_[0] + coeff_[1] * c;
        for (std::size_t k = 2; k < n_terms; ++k) {
            const double tk_next = 2.0 * c * tk - tk_prev;
            tk_prev = tk;
            tk = tk_next;
            acc += coeff_[k] * tk;
        }
        t.f[static_cast<std::size_t>(j)] = std::max(acc, 0.0);
    }
    t.cdf.resize(t.f.size());
    t.cdf[0] = 0.0;
    for (std::size_t j = 1; j < t.f.size(); ++j)
        t.cdf[j] = t.cdf[j - 1] + 0.5 * (t.f[j - 1] + t.f[j]) * t.dx;
    return t;
}

double KouDensity::Table::value(double x) const {
    const double pos = (x - x_lo) / dx;
    if (pos <= 0.0 || pos >= static_cast<double>(f.size() - 1)) return 0.0;
    const std::size_t j = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(j);
    return f[j] + w * (f[j + 1] - f[j]);
}

double KouDensity::Table::quantile(double q) const {
    const double target = q * cdf.back();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
    if (it == cdf.begin()) return x_lo;
    if (it == cdf.end()) return x_at(cdf.size() - 1);
    const std::size_t j = static_cast<std::size_t>(it - cdf.begin());
    const double seg = cdf[j] - cdf[j - 1];
    const double w = seg > 0.0 ? (target - cdf[j - 1]) / seg : 0.0;
    return x_at(j - 1) + w * dx;
}

double log_return_density(const KouParams& p, double dt, double x) {
    return KouDensity(p, dt)(x);
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

double DiscreteReturnDistribution::mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) m += weights[k] * gross_returns[k];
    return m;
}

double DiscreteReturnDistribution::second_moment() const {
    double m = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k)
        m += weights[k] * gross_returns[k] * gross_returns[k];
    return m;
}

DiscreteReturnDistribution period_return_quadrature(const KouParams& p, double dt, int n_nodes) {
    require(n_nodes >= 16, Errc::parameter_out_of_domain, "n_nodes must be >= 16");
    const KouDensity density(p, dt);
    const KouDensity::Table tab = density.table(8193);
    const double x_lo = tab.quantile(1e-7);
    const double x_hi = tab.quantile(1.0 - 1e-7);

    DiscreteReturnDistribution out;
    out.gross_returns.resize(static_cast<std::size_t>(n_nodes));
    out.weights.resize(static_cast<std::size_t>(n_nodes));
    const double h = (x_hi - x_lo) / static_cast<double>(n_nodes - 1);
    double total = 0.0;
    for (int k = 0; k < n_nodes; ++k) {
        const double x = x_lo + h * static_cast<double>(k);
        const double edge = (k == 0 || k == n_nodes - 1) ? 0.5 : 1.0;
        const double w = edge * density(x) * h;
        out.gross_returns[static_cast<std::size_t>(k)] = std::exp(x);
        out.weights[static_cast<std::size_t>(k)] = w;
        total += w;
    }
    for (double& w : out.weights) w /= total;
    return out;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

KouSampler::KouSampler(const KouParams& p, double dt) {
    p.validate();
    require(dt > 0.0, Errc::parameter_out_of_domain, "dt must be > 0");
    drift_dt_ = log_drift(p) * dt;
    sig_sqdt_ = p.sigma * std::sqrt(dt);
    lambda_dt_ = p.lambda * dt;
    p_up_ = p.p_up;
    eta1_ = p.eta1;
    eta2_ = p.eta2;
}

double KouSampler::operator()(std::mt19937_64& rng) const {
    // Box-Muller keeps the draw independent of library internals.
    const double u1 = uniform01(rng), u2 = uniform01(rng);
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    double x = drift_dt_ + sig_sqdt_ * z;
    if (lambda_dt_ > 0.0) {
        std::poisson_distribution<int> pois(lambda_dt_);
        const int n_jumps = pois(rng);
        for (int j = 0; j < n_jumps; ++j) {
            const double side = uniform01(rng);
            const double mag = -std::log(uniform01(rng));
            x += side < p_up_ ? mag / eta1_ : -mag / eta2_;
        }
    }
    return std::exp(x);
}

std::vector<double> simulate_gross_returns(const KouParams& p, double dt,
                                           std::size_t n_periods, std::uint64_t seed) {
    const KouSampler sampler(p, dt);
    std::mt19937_64 rng = path_rng(seed, 0);
    std::vector<double> out(n_periods);
    for (double& g : out) g = sampler(rng);
    return out;
}

// ---------------------------------------------------------------------------
// Maximum likelihood
// ---------------------------------------------------------------------------

namespace {

// Smooth reparameterization keeping every proposal inside the admissible
// region (sigma > 0, lambda >= 0, p_up in [0,1], eta1 > 2, eta2 > 0).
struct FitTransform {
    static double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

    static KouParams to_params(const std::array<double, 6>& th) {
        KouParams p;
        p.mu = th[0];
        p.sigma = 1e-3 + std::exp(clamp(th[1], -8.0, 3.0));
        p.lambda = std::exp(clamp(th[2], -20.0, 4.0));
        p.p_up = 1.0 / (1.0 + std::exp(-clamp(th[3], -20.0, 20.0)));
        p.eta1 = 2.0 + std::exp(clamp(th[4], -4.0, 7.0));
        p.eta2 = std::exp(clamp(th[5], -4.0, 7.0));
        return p;
    }
};

// Mean log-likelihood via a density table; exact cosine-series values are
// used once at the reported optimum. Observations falling outside the
// truncation range get a floor density, which penalizes the proposal.
double table_mean_loglik(const KouParams& p, double dt, const std::vector<double>& xs) {
    constexpr double kFloor = 1e-300;
    const KouDensity density(p, dt);
    const KouDensity::Table tab = density.table(2049);
    double acc = 0.0;
    for (const double x : xs) acc += std::log(std::max(tab.value(x), kFloor));
    return acc / static_cast<double>(xs.size());
}

double exact_loglik(const KouParams& p, double dt, const std::vector<double>& xs) {
    constexpr double kFloor = 1e-300;
    const KouDensity density(p, dt);
    double acc = 0.0;
    for (const double x : xs) acc += std::log(std::max(density(x), kFloor));
    return acc;
}

// Plain Nelder-Mead, deterministic given the start.
struct NmResult {
    std::array<double, 6> x;
    double f = std::numeric_limits<double>::infinity();
    bool converged = false;
};

NmResult nelder_mead(const std::function<double(const std::array<double, 6>&)>& f,
                     const std::array<double, 6>& start, const std::array<double, 6>& steps,
                     int max_iters) {
    constexpr int n = 6;
    using Point = std::array<double, 6>;
    std::vector<std::pair<double, Point>> simplex;
    simplex.reserve(n + 1);
    simplex.emplace_back(f(start), start);
    for (int i = 0; i < n; ++i) {
        Point v = start;
        v[static_cast<std::size_t>(i)] += steps[static_cast<std::size_t>(i)];
        simplex.emplace_back(f(v), v);
    }
    auto by_value = [](const auto& a, const auto& b) { return a.first < b.first; };

    NmResult res;
    for (int iter = 0; iter < max_iters; ++iter) {
        std::sort(simplex.begin(), simplex.end(), by_value);
        const double f_best = simplex.front().first;
        const double f_worst = simplex.back().first;
        double diameter = 0.0;
        for (int d = 0; d < n; ++d)
            diameter = std::max(diameter,
                                std::fabs(simplex.back().second[static_cast<std::size_t>(d)] -
                                          simplex.front().second[static_cast<std::size_t>(d)]));
        if (std::isfinite(f_best) &&
            (f_worst - f_best < 1e-9 * (1.0 + std::fabs(f_best)) || diameter < 1e-7)) {
            res.converged = true;
            break;
        }
        Point centroid{};
        for (int i = 0; i < n; ++i)
            for (int d = 0; d < n; ++d)
                centroid[static_cast<std::size_t>(d)] +=
                    simplex[static_cast<std::size_t>(i)].second[static_cast<std::size_t>(d)] / n;

        auto blend = [&](double coef) {
            Point p;
            for (int d = 0; d < n; ++d)
                p[static_cast<std::size_t>(d)] =
                    centroid[static_cast<std::size_t>(d)] +
                    coef * (simplex.back().second[static_cast<std::size_t>(d)] -
                            centroid[static_cast<std::size_t>(d)]);
            return p;
        };

        const Point refl = blend(-1.0);
        const double f_refl = f(refl);
        if (f_refl < simplex.front().first) {
            const Point expd = blend(-2.0);
            const double f_expd = f(expd);
            if (f_expd < f_refl)
                simplex.back() = {f_expd, expd};
            else
                simplex.back() = {f_refl, refl};
        } else if (f_refl < simplex[n - 1].first) {
            simplex.back() = {f_refl, refl};
        } else {
            const Point contr = blend(f_refl < f_worst ? -0.5 : 0.5);
            const double f_contr = f(contr);
            if (f_contr < std::min(f_refl, f_worst)) {
                simplex.back() = {f_contr, contr};
            } else {
                // shrink toward the best vertex
                for (int i = 1; i <= n; ++i) {
                    Point& v = simplex[static_cast<std::size_t>(i)].second;
                    for (int d = 0; d < n; ++d)
                        v[static_cast<std::size_t>(d)] =
                            simplex[0].second[static_cast<std::size_t>(d)] +
                            0.5 * (v[static_cast<std::size_t>(d)] -
                                   simplex[0].second[static_cast<std::size_t>(d)]);
                    simplex[static_cast<std::size_t>(i)].first = f(v);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(), by_value);
    res.x = simplex.front().second;
    res.f = simplex.front().first;
    return res;
}

// mu that reproduces the observed mean log return for given shape params:
// E[X]/dt = mu - sigma^2/2 - lambda*kappa + lambda*E[Y].
double mu_matching_mean(double mean_annual, const KouParams& p) {
    const JumpExpMoments jm = jump_exp_moments(p);
    return mean_annual + 0.5 * p.sigma * p.sigma + p.lambda * jm.kappa - p.lambda * jump_mean(p);
}

} // namespace

FitResult fit_mle(const ReturnSeries& returns, double dt) {
    require(returns.size() >= 120, Errc::insufficient_data,
            "need >= 120 observations, got " + std::to_string(returns.size()));
    require(dt > 0.0, Errc::parameter_out_of_domain, "dt must be > 0");
    const std::vector<double>& xs = returns.log_returns;
    const MeanStd ms = mean_std(xs);
    require(ms.std > 0.0, Errc::degenerate_series, "zero variance");

    const double mean_annual = ms.mean / dt;          // annualized mean log return
    const double sigma_annual = ms.std / std::sqrt(dt); // annualized std of log returns

    // Gaussian MLE benchmark (the lambda -> 0 nested model). The ML variance
    // uses the n denominator.
    const double n = static_cast<double>(xs.size());
    const double var_ml = ms.std * ms.std * (n - 1.0) / n;
    const double gauss_ll =
        -0.5 * n * (std::log(2.0 * kPi * var_ml) + 1.0);

    // Documented deterministic starts: (sigma_frac, lambda, p_up, eta1, eta2).
    // Start 0 is the Gaussian-matched point so the fit can never end below
    // the nested Gaussian model.
    struct Start {
        double sigma_frac, lambda, p_up, eta1, eta2;
    };
    const Start starts[] = {
        {1.00, 2e-9, 0.5, 50.0, 50.0}, // Gaussian-matched
        {0.95, 0.1, 0.3, 8.0, 6.0},    // sparse moderate jumps
        {0.85, 0.5, 0.3, 5.0, 4.0},    // moderate intensity
        {0.70, 2.0, 0.4, 10.0, 8.0},   // frequent small jumps
        {0.90, 0.3, 0.1, 12.0, 3.0},   // downward-heavy
        {0.90, 0.3, 0.9, 3.0, 12.0},   // upward-heavy
        {0.50, 6.0, 0.5, 30.0, 30.0},  // jump-dominated, tiny jumps
        {0.65, 1.0, 0.25, 4.0, 2.5},   // heavy tails
        {0.80, 0.8, 0.5, 6.0, 6.0},    // symmetric medium
    };

    const auto objective = [&](const std::array<double, 6>& th) {
        const KouParams p = FitTransform::to_params(th);
        return -table_mean_loglik(p, dt, xs);
    };

    FitResult best;
    best.log_likelihood = -std::numeric_limits<double>::infinity();
    best.gaussian_log_likelihood = gauss_ll;
    best.best_start = -1;
    best.n_obs = xs.size();
    std::array<double, 6> best_th{};

    for (std::size_t s = 0; s < std::size(starts); ++s) {
        KouParams p0;
        p0.sigma = std::max(starts[s].sigma_frac * sigma_annual, 2e-3);
        p0.lambda = starts[s].lambda;
        p0.p_up = starts[s].p_up;
        p0.eta1 = starts[s].eta1;
        p0.eta2 = starts[s].eta2;
        p0.mu = mu_matching_mean(mean_annual, p0);

        const std::array<double, 6> th0 = {
            p0.mu,
            std::log(p0.sigma - 1e-3),
            std::log(p0.lambda),
            std::log(p0.p_up / (1.0 - p0.p_up)),
            std::log(p0.eta1 - 2.0),
            std::log(p0.eta2),
        };
        const std::array<double, 6> steps = {0.02, 0.15, 0.5, 0.4, 0.3, 0.3};
        const NmResult nm = nelder_mead(objective, th0, steps, 700);
        if (!std::isfinite(nm.f)) continue;

        const KouParams fitted = FitTransform::to_params(nm.x);
        const double ll = exact_loglik(fitted, dt, xs);
        if (ll > best.log_likelihood) {
            best.log_likelihood = ll;
            best.params = fitted;
            best.params.dt_months = dt * 12.0;
            best.best_start = static_cast<int>(s);
            best_th = nm.x;
        }
    }
    if (best.best_start < 0)
        raise(Errc::optimization_failed, "no start produced a finite likelihood");

    // Polish the winner with a tighter simplex.
    {
        const std::array<double, 6> steps = {0.004, 0.03, 0.08, 0.08, 0.06, 0.06};
        const NmResult nm = nelder_mead(objective, best_th, steps, 500);
        if (std::isfinite(nm.f)) {
            const KouParams fitted = FitTransform::to_params(nm.x);
            const double ll = exact_loglik(fitted, dt, xs);
            if (ll > best.log_likelihood) {
                best.log_likelihood = ll;
                best.params = fitted;
                best.params.dt_months = dt * 12.0;
            }
        }
    }

    // The double-exponential jump component can mimic pure diffusion along
    // the lambda -> infinity, eta -> infinity ridge, where the parameters
    // stop being identified. Keep the jump fit only when it beats the
    // nested Gaussian model by the 5% likelihood-ratio hurdle for its four
    // extra parameters (chi^2_4 critical 9.49, i.e. 4.74 log-units);
    // otherwise report the Gaussian-limit fit.
    {
        KouParams gauss;
        gauss.sigma = std::sqrt(var_ml / dt);
        gauss.lambda = 2e-9;
        gauss.p_up = 0.5;
        gauss.eta1 = 50.0;
        gauss.eta2 = 50.0;
        gauss.mu = mu_matching_mean(mean_annual, gauss);
        gauss.dt_months = dt * 12.0;
        const double gauss_limit_ll = exact_loglik(gauss, dt, xs);
        if (best.log_likelihood - gauss_limit_ll <= 4.74) {
            best.params = gauss;
            best.log_likelihood = gauss_limit_ll;
            best.best_start = 0;
        }
    }
    return best;
}

} // namespace tdf
