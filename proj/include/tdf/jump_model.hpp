#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "tdf/errors.hpp"
#include "tdf/market_data.hpp"

namespace tdf {

// Kou double-exponential jump diffusion for the real equity index, plus
// the deterministic real bond drift. mu is the arithmetic growth rate:
// E[S_{t+dt}/S_t] = exp(mu*dt), with the compensator a = mu - sigma^2/2
// - lambda*kappa applied to the log drift internally.
struct KouParams {
    double mu = 0.08;     // equity drift, per year
    double sigma = 0.15;  // diffusive volatility, per sqrt(year)
    double lambda = 0.0;  // jump intensity, per year
    double p_up = 0.5;    // probability a jump is upward
    double eta1 = 10.0;   // upward jump decay rate (log scale), > 2
    double eta2 = 5.0;    // downward jump decay rate (log scale), > 0
    double r = 0.0;       // real bond log drift, per year
    double dt_months = 1; // sampling interval the fit used, in months

    void validate() const; // raises parameter_out_of_domain
};

struct JumpExpMoments {
    double m1;    // E[e^Y]
    double m2;    // E[e^{2Y}]
    double kappa; // m1 - 1
};

JumpExpMoments jump_exp_moments(const KouParams& p);

// Compensated log drift a = mu - sigma^2/2 - lambda*kappa.
double log_drift(const KouParams& p);

// Closed-form one-period gross return moments:
//   E[G]   = exp(mu*dt)
//   E[G^2] = exp((2*mu + sigma^2 + lambda*(m2 - 2*m1 + 1)) * dt)
double gross_mean(const KouParams& p, double dt);
double gross_second_moment(const KouParams& p, double dt);

// One-period log-return density recovered from the characteristic function
//   phi(u) = exp(dt*(i*u*a - sigma^2 u^2 / 2 + lambda*(phi_Y(u) - 1)))
// by a Fourier-cosine (COS) expansion on [x_lo, x_hi]. The truncation range
// comes from the cumulants; n_terms is chosen so the Gaussian factor has
// fully decayed at the highest retained frequency.
class KouDensity {
public:
    KouDensity(const KouParams& p, double dt_years);

    // Density at x, clamped at zero; zero outside the truncation range.
    double operator()(double x) const;

    double x_lo() const noexcept { return x_lo_; }
    double x_hi() const noexcept { return x_hi_; }
    int n_terms() const noexcept { return static_cast<int>(coeff_.size()); }

    // Uniform table of n_points density values over [x_lo, x_hi] with the
    // trapezoid CDF alongside; the workhorse for likelihoods, quantiles
    // and quadrature.
    struct Table {
        double x_lo, dx;
        std::vector<double> f;   // clamped density values
        std::vector<double> cdf; // trapezoid cumulative, cdf.front() = 0

        double x_at(std::size_t i) const { return x_lo + dx * static_cast<double>(i); }
        double value(double x) const;      // linear interp, 0 outside
        double integral() const { return cdf.back(); }
        double quantile(double q) const;   // inverse of cdf/cdf.back()
    };

    Table table(int n_points = 4097) const;

private:
    double x_lo_, x_hi_;
    std::vector<double> coeff_; // cosine coefficients, k=0 term pre-halved
};

// Convenience single-point evaluation (builds the expansion each call).
double log_return_density(const KouParams& p, double dt, double x);

// One-period gross-return law on discrete nodes, for the policy solver.
struct DiscreteReturnDistribution {
    std::vector<double> gross_returns; // strictly increasing, positive
    std::vector<double> weights;       // nonnegative, sum to 1

    double mean() const;
    double second_moment() const;
};

// Nodes spread over [Q(1e-7), Q(1-1e-7)] of the inverted density with
// trapezoid weights, renormalized. Moment accuracy targets (1e-4 on the
// mean, 1e-3 on the second moment) hold for n_nodes >= 128.
DiscreteReturnDistribution period_return_quadrature(const KouParams& p, double dt,
                                                    int n_nodes = 512);

// Draws one gross return exp(a*dt + sigma*sqrt(dt)*Z + sum of jumps).
class KouSampler {
public:
    KouSampler(const KouParams& p, double dt_years);
    double operator()(std::mt19937_64& rng) const;

private:
    double drift_dt_, sig_sqdt_, lambda_dt_, p_up_, eta1_, eta2_;
};

// n_periods gross returns drawn from stream 0 of the seed (see rng.hpp).
std::vector<double> simulate_gross_returns(const KouParams& p, double dt,
                                           std::size_t n_periods, std::uint64_t seed);

struct FitResult {
    KouParams params;          // r is left untouched (not fitted here)
    double log_likelihood;     // exact cosine-expansion log-likelihood
    double gaussian_log_likelihood; // closed-form Gaussian MLE benchmark
    int best_start;            // index into the documented start list
    std::size_t n_obs;
};

// Maximum likelihood over (mu, sigma, lambda, p_up, eta1, eta2) with the
// invariant bounds enforced by smooth reparameterization. Multi-start
// Nelder-Mead from a fixed list of 9 starts spanning low/high intensity
// and asymmetric tails; deterministic. Needs >= 120 observations.
FitResult fit_mle(const ReturnSeries& returns, double dt_years);

} // namespace tdf
