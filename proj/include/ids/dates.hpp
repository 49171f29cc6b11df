#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace ids {

inline constexpr std::int64_t kSecondsPerDay = 86400;

// Floor division for possibly negative timestamps.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Civil day index (days since 1970-01-01) of the local civil date at `ts`.
inline int local_day(std::int64_t ts, std::int64_t utc_offset_s) {
    return static_cast<int>(floor_div(ts + utc_offset_s, kSecondsPerDay));
}

// Minutes since local midnight, in [0, 1440).
inline double minutes_since_midnight(std::int64_t ts, std::int64_t utc_offset_s) {
    std::int64_t local = ts + utc_offset_s;
    std::int64_t rem = local - floor_div(local, kSecondsPerDay) * kSecondsPerDay;
    return static_cast<double>(rem) / 60.0;
}

// Epoch timestamp of local midnight of the given civil day index.
inline std::int64_t day_start_ts(int day, std::int64_t utc_offset_s) {
    return static_cast<std::int64_t>(day) * kSecondsPerDay - utc_offset_s;
}

// Howard Hinnant's civil date algorithms.
inline void civil_from_days(int z, int& y, int& m, int& d) {
    z += 719468;
    int era = (z >= 0 ? z : z - 146096) / 146097;
    unsigned doe = static_cast<unsigned>(z - era * 146097);
    unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<int>(yoe) + era * 400;
    unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    y += (m <= 2);
}

inline int days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    int era = (y >= 0 ? y : y - 399) / 400;
    unsigned yoe = static_cast<unsigned>(y - era * 400);
    unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
    unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int>(doe) - 719468;
}

inline std::string format_date(int day) {
    int y, m, d;
    civil_from_days(day, y, m, d);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
    return buf;
}

inline int parse_date(const std::string& s) {
    int y, m, d;
    if (std::sscanf(s.c_str(), "%d-%d-%d", &y, &m, &d) != 3) throw std::invalid_argument("bad date: " + s);
    return days_from_civil(y, m, d);
}

}  // namespace ids
