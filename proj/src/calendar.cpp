#include "tdf/calendar.hpp"

#include <cctype>
#include <cstdio>

namespace tdf {

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

YearMonth parse_year_month(const std::string& text) {
    if (text.size() != 7 || text[4] != '-')
        raise(Errc::malformed_row, "expected YYYY-MM date, got '" + text + "'");
    for (int i : {0, 1, 2, 3, 5, 6})
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            raise(Errc::malformed_row, "expected YYYY-MM date, got '" + text + "'");
    int year = std::stoi(text.substr(0, 4));
    int month = std::stoi(text.substr(5, 2));
    if (month < 1 || month > 12)
        raise(Errc::malformed_row, "month out of range in '" + text + "'");
    return {year, month};
}

} // namespace tdf
