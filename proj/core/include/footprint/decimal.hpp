#pragma once

// Fixed-point decimal used for every energy figure in the toolkit.
//
// Values are stored as int64 multiples of 10^-7 kWh. All reported numbers
// are sums of (image count) x (per-image factor); with factors limited to
// 7 fractional digits those sums are exact, so audit chains never pick up
// binary-float drift. Division (rates, ratios) rounds half-up at the same
// scale and is the only lossy operation.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace footprint {

class DecimalError : public std::runtime_error {
public:
    explicit DecimalError(const std::string& what) : std::runtime_error(what) {}
};

class Decimal {
public:
    static constexpr int kFracDigits = 7;
    static constexpr std::int64_t kScale = 10'000'000;

    constexpr Decimal() = default;

    static constexpr Decimal from_units(std::int64_t units) {
        Decimal d;
        d.units_ = units;
        return d;
    }

    static constexpr Decimal from_int(std::int64_t whole) {
        return from_units(whole * kScale);
    }

    // Parses a dot-decimal literal ("0.0029", "-1.5", "12"). Rejects more
    // than 7 fractional digits instead of silently rounding.
    static Decimal parse(std::string_view text);

    constexpr std::int64_t units() const { return units_; }
    constexpr bool is_zero() const { return units_ == 0; }
    constexpr bool is_negative() const { return units_ < 0; }

    Decimal operator+(Decimal other) const;
    Decimal operator-(Decimal other) const;
    Decimal& operator+=(Decimal other) { return *this = *this + other; }
    Decimal& operator-=(Decimal other) { return *this = *this - other; }

    // Exact product with an integer count; throws DecimalError on overflow.
    Decimal times(std::int64_t count) const;

    // Decimal x Decimal, rounded half-up to scale. Exact whenever the true
    // product has at most 7 fractional digits.
    Decimal mul(Decimal other) const;

    // Division rounded half-up to scale. Throws DecimalError on zero divisor.
    Decimal div(Decimal other) const;

    // Rounds half-up (half away from zero) to `digits` fractional digits.
    Decimal rounded(int digits) const;

    // Shortest exact representation: "32.1088", "6", "0.05".
    std::string str() const;

    // Fixed representation with exactly `digits` fractional digits,
    // rounded half-up: fixed(2) of 1.7458 is "1.75".
    std::string fixed(int digits) const;

    double to_double() const { return static_cast<double>(units_) / kScale; }

    auto operator<=>(const Decimal&) const = default;

private:
    std::int64_t units_ = 0;
};

}  // namespace footprint
