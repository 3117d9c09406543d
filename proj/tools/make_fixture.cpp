// Generates fixtures/synthetic_market.csv: 1080 months (1926-01..2015-12)
// of nominal equity, nominal bill and CPI levels, from a Kou jump-diffusion
// real equity leg, an AR(0) real bill leg and lognormal monthly inflation.
// Regenerate with:  make_fixture <out.csv> [seed]   (default seed 42)

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <string>

#include "tdf/calendar.hpp"
#include "tdf/jump_model.hpp"
#include "tdf/rng.hpp"

namespace {

// Real-terms generating parameters, chosen so a 60-40 portfolio over 30
// years lands near the usual long-run US figures.
constexpr double kMu = 0.105;       // equity drift, per year
constexpr double kSigma = 0.135;    // diffusive vol, per sqrt(year)
constexpr double kLambda = 0.28;    // jumps per year
constexpr double kPUp = 0.28;
constexpr double kEta1 = 4.9;
constexpr double kEta2 = 3.9;
constexpr double kBondDrift = 0.0045;   // real bill log drift, per year
constexpr double kBondVol = 0.0042;     // monthly real bill noise
constexpr double kInflMean = 0.0024;    // monthly log inflation
constexpr double kInflVol = 0.0028;
constexpr int kMonths = 1080;

} // namespace

int main(int argc, char** argv) {
    const std::string out_path = argc > 1 ? argv[1] : "fixtures/synthetic_market.csv";
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 42ULL;

    tdf::KouParams params;
    params.mu = kMu;
    params.sigma = kSigma;
    params.lambda = kLambda;
    params.p_up = kPUp;
    params.eta1 = kEta1;
    params.eta2 = kEta2;
    params.r = kBondDrift;

    const tdf::KouSampler equity(params, 1.0 / 12.0);
    std::mt19937_64 rng = tdf::path_rng(seed, 0);

    std::ofstream out(out_path);
    if (!out) {
        std::fprintf(stderr, "cannot write %s\n", out_path.c_str());
        return 2;
    }
    out << "date,equity_nominal,bill_nominal,cpi\n";

    double eq_real = 100.0, bill_real = 100.0, cpi = 100.0;
    tdf::YearMonth ym{1926, 1};
    char line[160];
    for (int m = 0; m < kMonths; ++m) {
        std::snprintf(line, sizeof line, "%s,%.6f,%.6f,%.6f\n", ym.str().c_str(),
                      eq_real * cpi / 100.0, bill_real * cpi / 100.0, cpi);
        out << line;

        const double u1 = tdf::uniform01(rng), u2 = tdf::uniform01(rng);
        const double z_bond = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
        const double u3 = tdf::uniform01(rng), u4 = tdf::uniform01(rng);
        const double z_infl = std::sqrt(-2.0 * std::log(u3)) * std::cos(6.283185307179586 * u4);

        eq_real *= equity(rng);
        bill_real *= std::exp(kBondDrift / 12.0 + kBondVol * z_bond);
        cpi *= std::exp(kInflMean + kInflVol * z_infl);
        ym = ym.plus_months(1);
    }
    std::printf("wrote %s (%d months, seed %llu)\n", out_path.c_str(), kMonths,
                static_cast<unsigned long long>(seed));
    return 0;
}
