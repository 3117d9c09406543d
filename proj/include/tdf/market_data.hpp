#pragma once

#include <iosfwd>
#include <vector>

#include "tdf/calendar.hpp"
#include "tdf/errors.hpp"

namespace tdf {

// Monthly index levels, contiguous months, all strictly positive.
struct MonthlySeries {
    YearMonth start_month;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    YearMonth month_at(std::size_t i) const { return start_month.plus_months(static_cast<int>(i)); }
};

// Monthly log returns. Entry i covers the month starting at
// start_month.plus_months(i), i.e. the move from level i to level i+1 of
// the source series.
struct ReturnSeries {
    YearMonth start_month;
    std::vector<double> log_returns;

    std::size_t size() const noexcept { return log_returns.size(); }
};

// The three columns of the input CSV, one MonthlySeries each.
struct MarketCsv {
    MonthlySeries equity_nominal;
    MonthlySeries bill_nominal;
    MonthlySeries cpi;
};

// Inflation-adjusted market, derived from a MarketCsv. Everything
// downstream (fitting, bootstrap, replay) works off this.
struct RealMarket {
    MonthlySeries equity; // real equity index
    MonthlySeries bond;   // real bond index
    ReturnSeries equity_returns;
    ReturnSeries bond_returns;
    double bond_drift = 0.0; // annualized real log drift r
};

// Reads the CSV contract: header "date,equity_nominal,bill_nominal,cpi",
// date formatted YYYY-MM, one row per month, ascending and contiguous.
// Raises malformed_row / gap_in_dates / non_positive_level.
MarketCsv load_monthly_series(std::istream& in);
MarketCsv load_monthly_series_file(const std::string& path);

// result[i] = nominal[i] * cpi[0] / cpi[i]; same start month required.
MonthlySeries to_real_index(const MonthlySeries& nominal, const MonthlySeries& cpi);

// log(values[i+1] / values[i]) for each i.
ReturnSeries log_returns(const MonthlySeries& series);

// Affine rescale to sample mean 0 and sample std 1 (n-1 denominator).
ReturnSeries standardize_returns(const ReturnSeries& series);

// r = 12 * mean monthly log change of the (already real) bond index.
double estimate_bond_drift(const MonthlySeries& real_bond_index);

RealMarket build_real_market(const MarketCsv& csv);

} // namespace tdf
