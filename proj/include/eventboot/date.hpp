#pragma once

#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

namespace eventboot {

// Calendar date at day resolution, stored as yyyymmdd. Anything finer in the
// input is truncated to the day.
class Date {
public:
    Date() = default;
    Date(int year, int month, int day)
        : ymd_(year * 10000 + month * 100 + day) {}

    // Parses "YYYY-MM-DD". A trailing time component ("T..." or " ...") is
    // ignored. Returns nullopt when the text does not name a real calendar day.
    static std::optional<Date> parse(const std::string& s) {
        if (s.size() < 10) return std::nullopt;
        if (s.size() > 10 && s[10] != 'T' && s[10] != ' ') return std::nullopt;
        for (int i = 0; i < 10; ++i) {
            if (i == 4 || i == 7) {
                if (s[i] != '-') return std::nullopt;
            } else if (s[i] < '0' || s[i] > '9') {
                return std::nullopt;
            }
        }
        int y = (s[0] - '0') * 1000 + (s[1] - '0') * 100 + (s[2] - '0') * 10 + (s[3] - '0');
        int m = (s[5] - '0') * 10 + (s[6] - '0');
        int d = (s[8] - '0') * 10 + (s[9] - '0');
        if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) return std::nullopt;
        return Date(y, m, d);
    }

    std::string str() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year(), month(), day());
        return buf;
    }

    int year() const { return ymd_ / 10000; }
    int month() const { return (ymd_ / 100) % 100; }
    int day() const { return ymd_ % 100; }
    std::int32_t key() const { return ymd_; }

    // The date `n` calendar days later. Used by the synthetic generator.
    Date plus_days(int n) const {
        int y = year(), m = month(), d = day() + n;
        while (d > days_in_month(y, m)) {
            d -= days_in_month(y, m);
            if (++m > 12) { m = 1; ++y; }
        }
        return Date(y, m, d);
    }

    auto operator<=>(const Date&) const = default;

private:
    static int days_in_month(int y, int m) {
        static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        if (m == 2 && (y % 4 == 0 && (y % 100 != 0 || y % 400 == 0))) return 29;
        return kDays[m - 1];
    }

    std::int32_t ymd_ = 0;
};

}  // namespace eventboot
