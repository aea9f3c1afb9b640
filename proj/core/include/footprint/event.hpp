#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace footprint {

enum class Platform { MidjourneyDiscord, ChatGPTExport, GenericEvents };

std::string_view platform_name(Platform p);

// A UTC instant. Inputs without a timezone are read as UTC and flagged so
// the report can surface the assumption.
struct Timestamp {
    std::int64_t epoch_seconds = 0;
    bool tz_was_missing = false;

    auto operator<=>(const Timestamp& other) const { return epoch_seconds <=> other.epoch_seconds; }
    bool operator==(const Timestamp& other) const { return epoch_seconds == other.epoch_seconds; }
};

// Parses ISO-8601 ("2024-03-01T10:15:00Z", offset, or date-only) without
// touching the process locale. Returns nullopt on malformed input.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(const Timestamp& ts);

// One normalized line of a usage log, before classification.
struct RawEvent {
    Platform platform = Platform::GenericEvents;
    // Canonical platform label used for factor lookup ("midjourney",
    // "chatgpt", or whatever a generic record declares).
    std::string platform_label;
    std::string author_id;
    std::optional<std::string> author_name;
    std::optional<Timestamp> timestamp;
    std::string content;
    std::optional<std::string> session_id;

    // ChatGPT exports: the message author role ("user", "assistant", ...).
    std::optional<std::string> chat_role;
    // Generic records may carry a precomputed image count; such events skip
    // rule matching downstream.
    std::optional<std::int64_t> precount;
    // Generic records may tag the actor role explicitly ("student",
    // "teacher_preparation", "teacher_support").
    std::optional<std::string> role_hint;
    // Media kind for factor lookup; anything but "image" has no default
    // energy factor.
    std::string media = "image";
};

struct FileParseStats {
    std::int64_t rows_read = 0;
    std::int64_t rows_emitted = 0;
    std::int64_t rows_dropped_empty = 0;
    std::int64_t rows_malformed = 0;
    std::int64_t timestamps_missing_tz = 0;
    std::int64_t timestamps_absent = 0;
};

struct ParseStats {
    FileParseStats totals;
    std::map<std::string, FileParseStats> per_file;

    void add_file(const std::string& name, const FileParseStats& s);
    // rows_read == rows_emitted + rows_dropped_empty + rows_malformed
    bool conserved() const;
};

}  // namespace footprint
