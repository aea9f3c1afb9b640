#pragma once

// Parsers for the supported log exports. Each parser is pure with respect
// to its input bytes: same bytes in, same events and stats out, in input
// order, with every input row accounted for in the stats.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "footprint/event.hpp"

namespace footprint {

struct CsvOptions {
    char delimiter = ',';
    // Header names are matched case-insensitively after trimming; aliases
    // map alternative header spellings onto canonical columns
    // (e.g. "author" -> "author_id"). Keys and values are canonical-lowered.
    std::map<std::string, std::string> header_aliases = {
        {"author", "author_id"},
        {"user", "author_id"},
        {"user_id", "author_id"},
        {"username", "author_name"},
        {"message", "content"},
        {"text", "content"},
        {"date", "timestamp"},
        {"time", "timestamp"},
    };
    // strict: malformed rows and bad encoding abort; lenient: skipped and
    // counted in rows_malformed.
    bool strict = false;
};

struct ParseResult {
    std::vector<RawEvent> events;
    ParseStats stats;
};

// Discord chat dump (Discordmate-style delimited export). Requires header
// columns author_id and content; author_name, timestamp and channel are
// optional.
ParseResult parse_discord_csv(std::istream& in, const CsvOptions& options,
                              const std::string& source_name = "discord.csv");

// Conversation-history file from a ChatGPT personal-data export. Emits one
// event per message; DALL-E counting happens in classification.
ParseResult parse_chatgpt_export(std::istream& in,
                                 const std::string& source_name = "conversations.json");

// Line-delimited JSON records {platform, author_id, content, timestamp?,
// session_id?, image_count?, role?, media?} — the extension point for
// platforms without a structured export.
ParseResult parse_generic_events(std::istream& in, bool strict = false,
                                 const std::string& source_name = "events.jsonl");

// Splits one CSV record (RFC 4180 quoting) into fields. Exposed for the
// benefit of fixtures and tools; parse_discord_csv uses it internally.
std::vector<std::string> split_csv_record(const std::string& line, char delimiter);

}  // namespace footprint
