#include "tdf/market_data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "tdf/numerics.hpp"

namespace tdf {

namespace {

double parse_level(const std::string& cell, std::size_t line_no) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v))
        raise(Errc::malformed_row,
              "line " + std::to_string(line_no) + ": cannot parse '" + cell + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

MarketCsv load_monthly_series(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) raise(Errc::malformed_row, "empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "date,equity_nominal,bill_nominal,cpi")
        raise(Errc::malformed_row, "unexpected header '" + line + "'");

    MarketCsv out;
    std::vector<double>* cols[3] = {&out.equity_nominal.values, &out.bill_nominal.values,
                                    &out.cpi.values};
    YearMonth prev{};
    bool first = true;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != 4)
            raise(Errc::malformed_row,
                  "line " + std::to_string(line_no) + ": expected 4 cells, got " +
                      std::to_string(cells.size()));
        const YearMonth ym = parse_year_month(cells[0]);
        if (first) {
            out.equity_nominal.start_month = out.bill_nominal.start_month =
                out.cpi.start_month = ym;
            first = false;
        } else {
            const int gap = months_between(prev, ym);
            if (gap != 1)
                raise(Errc::gap_in_dates, "expected " + prev.plus_months(1).str() +
                                              " after " + prev.str() + ", got " + ym.str());
        }
        prev = ym;
        for (int c = 0; c < 3; ++c) {
            const double v = parse_level(cells[static_cast<std::size_t>(c) + 1], line_no);
            if (v <= 0.0)
                raise(Errc::non_positive_level,
                      "line " + std::to_string(line_no) + ": level " + cells[c + 1]);
            cols[c]->push_back(v);
        }
    }
    if (out.cpi.values.size() < 2)
        raise(Errc::malformed_row, "need at least 2 data rows, got " +
                                       std::to_string(out.cpi.values.size()));
    return out;
}

MarketCsv load_monthly_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_error, "cannot open " + path);
    return load_monthly_series(in);
}

MonthlySeries to_real_index(const MonthlySeries& nominal, const MonthlySeries& cpi) {
    if (nominal.start_month != cpi.start_month || nominal.size() != cpi.size())
        raise(Errc::length_mismatch, "nominal and CPI series must align");
    MonthlySeries out;
    out.start_month = nominal.start_month;
    out.values.resize(nominal.size());
    const double base = cpi.values.front();
    for (std::size_t i = 0; i < nominal.size(); ++i)
        out.values[i] = nominal.values[i] * (base / cpi.values[i]);
    return out;
}

ReturnSeries log_returns(const MonthlySeries& series) {
    if (series.size() < 2) raise(Errc::insufficient_data, "need at least 2 levels");
    ReturnSeries out;
    out.start_month = series.start_month;
    out.log_returns.resize(series.size() - 1);
    for (std::size_t i = 0; i + 1 < series.size(); ++i)
        out.log_returns[i] = std::log(series.values[i + 1] / series.values[i]);
    return out;
}

ReturnSeries standardize_returns(const ReturnSeries& series) {
    if (series.size() < 2) raise(Errc::insufficient_data, "need at least 2 returns");
    const MeanStd ms = mean_std(series.log_returns);
    if (!(ms.std > 0.0)) raise(Errc::degenerate_series, "zero variance");
    ReturnSeries out;
    out.start_month = series.start_month;
    out.log_returns.resize(series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        out.log_returns[i] = (series.log_returns[i] - ms.mean) / ms.std;
    return out;
}

double estimate_bond_drift(const MonthlySeries& real_bond_index) {
    const ReturnSeries rs = log_returns(real_bond_index);
    return 12.0 * pairwise_sum(rs.log_returns) / static_cast<double>(rs.size());
}

RealMarket build_real_market(const MarketCsv& csv) {
    RealMarket m;
    m.equity = to_real_index(csv.equity_nominal, csv.cpi);
    m.bond = to_real_index(csv.bill_nominal, csv.cpi);
    m.equity_returns = log_returns(m.equity);
    m.bond_returns = log_returns(m.bond);
    m.bond_drift = estimate_bond_drift(m.bond);
    return m;
}

} // namespace tdf
