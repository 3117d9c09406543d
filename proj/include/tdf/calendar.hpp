#pragma once

#include <compare>
#include <string>

#include "tdf/errors.hpp"

namespace tdf {

// Calendar month, the time unit of all input series.
struct YearMonth {
    int year = 1900;
    int month = 1; // 1..12

    auto operator<=>(const YearMonth&) const = default;

    // Months since year 0, for gap checks and arithmetic.
    int index() const noexcept { return year * 12 + (month - 1); }

    YearMonth plus_months(int n) const noexcept {
        int i = index() + n;
        int y = i / 12, m = i % 12;
        if (m < 0) { m += 12; --y; }
        return {y, m + 1};
    }

    std::string str() const;
};

// Parses "YYYY-MM". Raises malformed_row on anything else.
YearMonth parse_year_month(const std::string& text);

inline int months_between(YearMonth from, YearMonth to) {
    return to.index() - from.index();
}

} // namespace tdf
