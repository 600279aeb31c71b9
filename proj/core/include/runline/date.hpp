#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace runline {

/// Calendar date. Plain value type; all arithmetic goes through the
/// civil-day conversion below so ordering and differences are exact.
struct Date {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    auto operator<=>(const Date&) const = default;
};

/// Parses "YYYY-MM-DD". Throws IngestError on malformed or impossible dates.
Date parse_date(const std::string& text);

/// Formats as "YYYY-MM-DD".
std::string to_string(const Date& d);

/// True iff the fields form a real calendar date (leap years included).
bool is_valid_date(const Date& d);

/// Days since 1970-01-01 (negative before). Howard Hinnant's civil algorithm.
std::int64_t to_civil_days(const Date& d);

/// Inverse of to_civil_days.
Date from_civil_days(std::int64_t days);

inline Date add_days(const Date& d, std::int64_t n) {
    return from_civil_days(to_civil_days(d) + n);
}

/// b - a in whole days.
inline std::int64_t days_between(const Date& a, const Date& b) {
    return to_civil_days(b) - to_civil_days(a);
}

}  // namespace runline
