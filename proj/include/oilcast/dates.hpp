#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace oilcast {

using Date = std::chrono::year_month_day;

// Days since 1970-01-01 (negative before the epoch).
inline long day_number(Date d) {
    return std::chrono::sys_days(d).time_since_epoch().count();
}

inline Date date_from_day_number(long n) {
    return Date(std::chrono::sys_days(std::chrono::days(n)));
}

inline Date add_days(Date d, long n) {
    return Date(std::chrono::sys_days(d) + std::chrono::days(n));
}

// b - a in days.
inline long days_between(Date a, Date b) {
    return day_number(b) - day_number(a);
}

std::string to_iso(Date d);

// Strict YYYY-MM-DD; rejects impossible calendar dates.
std::optional<Date> parse_iso(std::string_view text);

inline Date make_date(int year, unsigned month, unsigned day) {
    return Date(std::chrono::year(year), std::chrono::month(month),
                std::chrono::day(day));
}

} // namespace oilcast
