#include "footprint/event.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace footprint {
namespace {

// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool read_uint(std::string_view& s, size_t digits, std::int64_t& out) {
    if (s.size() < digits) return false;
    std::int64_t v = 0;
    for (size_t i = 0; i < digits; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        v = v * 10 + (s[i] - '0');
    }
    s.remove_prefix(digits);
    out = v;
    return true;
}

bool consume(std::string_view& s, char c) {
    if (s.empty() || s.front() != c) return false;
    s.remove_prefix(1);
    return true;
}

}  // namespace

std::string_view platform_name(Platform p) {
    switch (p) {
        case Platform::MidjourneyDiscord: return "midjourney_discord";
        case Platform::ChatGPTExport: return "chatgpt_export";
        case Platform::GenericEvents: return "generic_events";
    }
    return "unknown";
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);

    std::string_view s = text;
    std::int64_t year, month, day;
    if (!read_uint(s, 4, year) || !consume(s, '-') || !read_uint(s, 2, month) ||
        !consume(s, '-') || !read_uint(s, 2, day))
        return std::nullopt;
    if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;

    std::int64_t hour = 0, minute = 0, second = 0;
    bool has_tz = false;
    std::int64_t tz_offset = 0;
    if (!s.empty()) {
        if (!consume(s, 'T') && !consume(s, ' ')) return std::nullopt;
        if (!read_uint(s, 2, hour) || !consume(s, ':') || !read_uint(s, 2, minute))
            return std::nullopt;
        if (!s.empty() && s.front() == ':') {
            s.remove_prefix(1);
            if (!read_uint(s, 2, second)) return std::nullopt;
        }
        if (!s.empty() && s.front() == '.') {
            s.remove_prefix(1);
            size_t n = 0;
            while (n < s.size() && std::isdigit(static_cast<unsigned char>(s[n]))) ++n;
            if (n == 0) return std::nullopt;
            s.remove_prefix(n);  // sub-second precision is dropped
        }
        if (!s.empty()) {
            if (s.front() == 'Z' || s.front() == 'z') {
                s.remove_prefix(1);
                has_tz = true;
            } else if (s.front() == '+' || s.front() == '-') {
                bool negative = s.front() == '-';
                s.remove_prefix(1);
                std::int64_t oh, om = 0;
                if (!read_uint(s, 2, oh)) return std::nullopt;
                if (!s.empty() && s.front() == ':') s.remove_prefix(1);
                if (!s.empty() && !read_uint(s, 2, om)) return std::nullopt;
                tz_offset = (oh * 60 + om) * 60;
                if (negative) tz_offset = -tz_offset;
                has_tz = true;
            }
        }
        if (!s.empty()) return std::nullopt;
        if (hour > 23 || minute > 59 || second > 60) return std::nullopt;
    }

    Timestamp ts;
    ts.epoch_seconds = days_from_civil(year, static_cast<unsigned>(month),
                                       static_cast<unsigned>(day)) * 86400 +
                       hour * 3600 + minute * 60 + second - tz_offset;
    ts.tz_was_missing = !has_tz;
    return ts;
}

std::string format_timestamp(const Timestamp& ts) {
    std::int64_t s = ts.epoch_seconds;
    std::int64_t days = s / 86400;
    std::int64_t rem = s % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    // civil_from_days, inverse of the above
    std::int64_t z = days + 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);

    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(y + (m <= 2)), m, d,
                  static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

void ParseStats::add_file(const std::string& name, const FileParseStats& s) {
    per_file[name] = s;
    totals.rows_read += s.rows_read;
    totals.rows_emitted += s.rows_emitted;
    totals.rows_dropped_empty += s.rows_dropped_empty;
    totals.rows_malformed += s.rows_malformed;
    totals.timestamps_missing_tz += s.timestamps_missing_tz;
    totals.timestamps_absent += s.timestamps_absent;
}

bool ParseStats::conserved() const {
    auto check = [](const FileParseStats& s) {
        return s.rows_read == s.rows_emitted + s.rows_dropped_empty + s.rows_malformed;
    };
    if (!check(totals)) return false;
    for (const auto& [_, s] : per_file)
        if (!check(s)) return false;
    return true;
}

}  // namespace footprint
