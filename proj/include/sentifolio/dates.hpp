#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace sentifolio {

/// Calendar date (UTC day). Crypto markets trade every calendar day, so no
/// trading-calendar logic exists anywhere in this codebase.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    /// Days since 1970-01-01 (negative before the epoch).
    std::int64_t serial() const;
    static Date from_serial(std::int64_t days);

    Date next() const { return from_serial(serial() + 1); }

    std::string to_string() const;  // ISO-8601, "2020-02-14"
};

/// Parses "YYYY-MM-DD". Throws std::invalid_argument on malformed or
/// non-existent dates ("2021-02-30").
Date parse_date(const std::string& text);

struct DateRange {
    Date start;
    Date end;  // inclusive

    bool contains(const Date& d) const { return start <= d && d <= end; }
};

}  // namespace sentifolio
