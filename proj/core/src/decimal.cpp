#include "footprint/decimal.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <limits>

namespace footprint {
namespace {

using i128 = __int128;

constexpr std::array<std::int64_t, 8> kPow10 = {
    1, 10, 100, 1'000, 10'000, 100'000, 1'000'000, 10'000'000};

std::int64_t clamp_to_i64(i128 v, const char* op) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
        throw DecimalError(std::string("decimal overflow in ") + op);
    }
    return static_cast<std::int64_t>(v);
}

// Divide with rounding half away from zero.
std::int64_t div_half_up(i128 num, i128 den, const char* op) {
    if (den == 0) throw DecimalError("decimal division by zero");
    bool negative = (num < 0) != (den < 0);
    i128 n = num < 0 ? -num : num;
    i128 d = den < 0 ? -den : den;
    i128 q = n / d;
    i128 r = n % d;
    if (2 * r >= d) ++q;
    return clamp_to_i64(negative ? -q : q, op);
}

}  // namespace

Decimal Decimal::parse(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw DecimalError("empty decimal literal");

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    auto dot = s.find('.');
    std::string_view whole = dot == std::string_view::npos ? s : s.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (whole.empty() && frac.empty())
        throw DecimalError("malformed decimal literal: '" + std::string(text) + "'");
    if (frac.size() > kFracDigits)
        throw DecimalError("decimal literal '" + std::string(text) + "' has more than " +
                           std::to_string(kFracDigits) + " fractional digits");
    for (std::string_view part : {whole, frac}) {
        for (char c : part) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw DecimalError("malformed decimal literal: '" + std::string(text) + "'");
        }
    }

    std::int64_t whole_v = 0;
    if (!whole.empty()) {
        auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), whole_v);
        if (ec != std::errc() || p != whole.data() + whole.size())
            throw DecimalError("decimal literal out of range: '" + std::string(text) + "'");
    }
    std::int64_t frac_v = 0;
    if (!frac.empty()) {
        auto [p, ec] = std::from_chars(frac.data(), frac.data() + frac.size(), frac_v);
        if (ec != std::errc() || p != frac.data() + frac.size())
            throw DecimalError("malformed decimal literal: '" + std::string(text) + "'");
        frac_v *= kPow10[kFracDigits - frac.size()];
    }

    i128 units = i128(whole_v) * kScale + frac_v;
    return from_units(clamp_to_i64(negative ? -units : units, "parse"));
}

Decimal Decimal::operator+(Decimal other) const {
    return from_units(clamp_to_i64(i128(units_) + other.units_, "addition"));
}

Decimal Decimal::operator-(Decimal other) const {
    return from_units(clamp_to_i64(i128(units_) - other.units_, "subtraction"));
}

Decimal Decimal::times(std::int64_t count) const {
    return from_units(clamp_to_i64(i128(units_) * count, "integer multiply"));
}

Decimal Decimal::mul(Decimal other) const {
    return from_units(div_half_up(i128(units_) * other.units_, kScale, "multiply"));
}

Decimal Decimal::div(Decimal other) const {
    return from_units(div_half_up(i128(units_) * kScale, other.units_, "divide"));
}

Decimal Decimal::rounded(int digits) const {
    if (digits < 0 || digits > kFracDigits) throw DecimalError("rounding digits out of range");
    std::int64_t step = kPow10[kFracDigits - digits];
    return from_units(div_half_up(units_, step, "round") * step);
}

std::string Decimal::str() const {
    std::string out = fixed(kFracDigits);
    auto last = out.find_last_not_of('0');
    if (out[last] == '.') --last;
    out.erase(last + 1);
    return out;
}

std::string Decimal::fixed(int digits) const {
    std::int64_t units = rounded(digits).units();
    bool negative = units < 0;
    if (negative) units = -units;
    std::int64_t whole = units / kScale;
    std::int64_t frac = units % kScale;
    std::string out = negative ? "-" : "";
    out += std::to_string(whole);
    if (digits > 0) {
        std::string f = std::to_string(frac);
        f.insert(f.begin(), kFracDigits - f.size(), '0');
        out += '.';
        out += f.substr(0, digits);
    }
    return out;
}

}  // namespace footprint
