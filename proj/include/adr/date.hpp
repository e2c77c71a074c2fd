#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace adr {

/// Calendar date stored as days since 1970-01-01 (proleptic Gregorian).
/// Parsing is strict ISO-8601 (YYYY-MM-DD, years 1..9999).
class Date {
public:
    Date() = default;

    static std::optional<Date> parse(std::string_view iso);
    static std::optional<Date> make(int year, int month, int day);
    static Date from_days(std::int32_t days) { return Date(days); }

    std::int32_t days() const { return days_; }
    std::string str() const;

    Date plus_days(int n) const { return Date(days_ + n); }

    friend int operator-(Date a, Date b) { return a.days_ - b.days_; }
    auto operator<=>(const Date&) const = default;

private:
    explicit Date(std::int32_t d) : days_(d) {}
    std::int32_t days_ = 0;
};

}  // namespace adr
