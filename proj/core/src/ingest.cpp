#include "footprint/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "footprint/errors.hpp"

namespace footprint {
namespace {

using nlohmann::ordered_json;

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool valid_utf8(std::string_view s) {
    size_t i = 0;
    while (i < s.size()) {
        unsigned char c = s[i];
        size_t extra;
        if (c < 0x80) extra = 0;
        else if ((c & 0xE0) == 0xC0) extra = 1;
        else if ((c & 0xF0) == 0xE0) extra = 2;
        else if ((c & 0xF8) == 0xF0) extra = 3;
        else return false;
        if (i + extra >= s.size() && extra > 0) return false;
        for (size_t j = 1; j <= extra; ++j) {
            if ((static_cast<unsigned char>(s[i + j]) & 0xC0) != 0x80) return false;
        }
        i += extra + 1;
    }
    return true;
}

// Reads one CSV record, following RFC 4180 quoting across embedded
// newlines. Returns false at end of input.
bool read_csv_record(std::istream& in, std::string& record) {
    record.clear();
    if (in.peek() == std::char_traits<char>::eof()) return false;
    bool in_quotes = false;
    char c;
    while (in.get(c)) {
        if (c == '\r') continue;
        if (c == '"') in_quotes = !in_quotes;
        if (c == '\n' && !in_quotes) return true;
        record.push_back(c);
    }
    return !record.empty() || in_quotes;
}

void note_timestamp(const RawEvent& ev, FileParseStats& stats) {
    if (!ev.timestamp)
        ++stats.timestamps_absent;
    else if (ev.timestamp->tz_was_missing)
        ++stats.timestamps_missing_tz;
}

std::string json_string(const ordered_json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
    return j.dump();
}

}  // namespace

std::vector<std::string> split_csv_record(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == delimiter) {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

ParseResult parse_discord_csv(std::istream& in, const CsvOptions& options,
                              const std::string& source_name) {
    ParseResult result;
    FileParseStats stats;

    std::string record;
    if (!read_csv_record(in, record)) {
        throw AuditError(AuditError::Kind::MissingRequiredColumn,
                         source_name + ": empty file, no header row");
    }

    // Resolve header columns through the alias map.
    std::vector<std::string> header = split_csv_record(record, options.delimiter);
    std::map<std::string, size_t> columns;
    for (size_t i = 0; i < header.size(); ++i) {
        std::string name = lower(trim(header[i]));
        if (auto it = options.header_aliases.find(name); it != options.header_aliases.end())
            name = it->second;
        if (name == "channel") name = "session_id";
        columns.emplace(name, i);
    }
    for (const char* required : {"author_id", "content"}) {
        if (!columns.count(required))
            throw AuditError(AuditError::Kind::MissingRequiredColumn,
                             source_name + ": header lacks required column '" +
                                 std::string(required) + "'");
    }

    auto field = [&](const std::vector<std::string>& row, const char* name) -> std::string {
        auto it = columns.find(name);
        if (it == columns.end() || it->second >= row.size()) return {};
        return row[it->second];
    };

    while (read_csv_record(in, record)) {
        if (trim(record).empty()) continue;  // stray blank line, not a data row
        ++stats.rows_read;

        auto malformed = [&](const std::string& why, AuditError::Kind kind) {
            if (options.strict)
                throw AuditError(kind, source_name + " row " + std::to_string(stats.rows_read) +
                                           ": " + why);
            ++stats.rows_malformed;
        };

        if (!valid_utf8(record)) {
            malformed("invalid UTF-8", AuditError::Kind::EncodingError);
            continue;
        }
        std::vector<std::string> row = split_csv_record(record, options.delimiter);
        if (row.size() != header.size()) {
            malformed("field count mismatch (got " + std::to_string(row.size()) + ", expected " +
                          std::to_string(header.size()) + ")",
                      AuditError::Kind::MalformedRow);
            continue;
        }

        RawEvent ev;
        ev.platform = Platform::MidjourneyDiscord;
        ev.platform_label = "midjourney";
        ev.author_id = trim(field(row, "author_id"));
        ev.content = trim(field(row, "content"));
        if (std::string name = trim(field(row, "author_name")); !name.empty())
            ev.author_name = name;
        if (std::string sid = trim(field(row, "session_id")); !sid.empty()) ev.session_id = sid;
        if (std::string ts = trim(field(row, "timestamp")); !ts.empty()) {
            auto parsed = parse_timestamp(ts);
            if (!parsed) {
                malformed("unparseable timestamp '" + ts + "'", AuditError::Kind::MalformedRow);
                continue;
            }
            ev.timestamp = *parsed;
        }

        if (ev.content.empty()) {
            ++stats.rows_dropped_empty;
            continue;
        }
        note_timestamp(ev, stats);
        ++stats.rows_emitted;
        result.events.push_back(std::move(ev));
    }

    result.stats.add_file(source_name, stats);
    return result;
}

ParseResult parse_chatgpt_export(std::istream& in, const std::string& source_name) {
    ParseResult result;
    FileParseStats stats;

    ordered_json root;
    try {
        root = ordered_json::parse(in);
    } catch (const ordered_json::parse_error& e) {
        throw AuditError(AuditError::Kind::SchemaMismatch,
                         source_name + ": not valid JSON (" + e.what() + ")");
    }

    std::string account_id;
    const ordered_json* conversations = nullptr;
    if (root.is_array()) {
        conversations = &root;
    } else if (root.is_object() && root.contains("conversations") &&
               root["conversations"].is_array()) {
        conversations = &root["conversations"];
        if (root.contains("account_id")) account_id = json_string(root["account_id"]);
    } else {
        throw AuditError(AuditError::Kind::SchemaMismatch,
                         source_name + ": expected a conversation array at $ or $.conversations");
    }

    size_t conv_index = 0;
    for (const auto& conv : *conversations) {
        std::string path = "$[" + std::to_string(conv_index++) + "]";
        if (!conv.is_object())
            throw AuditError(AuditError::Kind::SchemaMismatch,
                             source_name + ": " + path + " is not an object");

        std::string session_id;
        for (const char* key : {"conversation_id", "id", "title"}) {
            if (conv.contains(key) && conv[key].is_string()) {
                session_id = conv[key].get<std::string>();
                break;
            }
        }
        if (session_id.empty()) session_id = "conversation-" + std::to_string(conv_index - 1);

        // Either a flat "messages" list or the export's "mapping" of nodes.
        struct Msg {
            const ordered_json* message;
            double create_time;
            bool has_time;
        };
        std::vector<Msg> messages;
        if (conv.contains("messages") && conv["messages"].is_array()) {
            for (const auto& m : conv["messages"]) messages.push_back({&m, 0, false});
        } else if (conv.contains("mapping") && conv["mapping"].is_object()) {
            for (const auto& [_, node] : conv["mapping"].items()) {
                if (!node.is_object() || !node.contains("message") || node["message"].is_null())
                    continue;
                const auto& m = node["message"];
                Msg msg{&m, 0, false};
                if (m.contains("create_time") && m["create_time"].is_number()) {
                    msg.create_time = m["create_time"].get<double>();
                    msg.has_time = true;
                }
                messages.push_back(msg);
            }
            std::stable_sort(messages.begin(), messages.end(), [](const Msg& a, const Msg& b) {
                if (a.has_time != b.has_time) return a.has_time;
                return a.has_time && a.create_time < b.create_time;
            });
        } else {
            throw AuditError(AuditError::Kind::SchemaMismatch,
                             source_name + ": " + path + " has neither .messages nor .mapping");
        }

        for (const auto& msg : messages) {
            ++stats.rows_read;
            const auto& m = *msg.message;

            std::string role = "unknown";
            if (m.contains("author") && m["author"].is_object() &&
                m["author"].contains("role") && m["author"]["role"].is_string())
                role = m["author"]["role"].get<std::string>();
            else if (m.contains("role") && m["role"].is_string())
                role = m["role"].get<std::string>();

            std::string content;
            if (m.contains("content")) {
                const auto& c = m["content"];
                if (c.is_string()) {
                    content = c.get<std::string>();
                } else if (c.is_object() && c.contains("parts") && c["parts"].is_array()) {
                    for (const auto& part : c["parts"]) {
                        if (!part.is_string()) continue;
                        if (!content.empty()) content += '\n';
                        content += part.get<std::string>();
                    }
                } else if (c.is_object() && c.contains("text") && c["text"].is_string()) {
                    content = c["text"].get<std::string>();
                }
            }

            RawEvent ev;
            ev.platform = Platform::ChatGPTExport;
            ev.platform_label = "chatgpt";
            ev.author_id = account_id.empty() ? role : account_id + ":" + role;
            ev.chat_role = role;
            ev.session_id = session_id;
            ev.content = trim(content);
            if (msg.has_time) {
                ev.timestamp = Timestamp{static_cast<std::int64_t>(msg.create_time), false};
            } else if (m.contains("create_time") && m["create_time"].is_string()) {
                ev.timestamp = parse_timestamp(m["create_time"].get<std::string>());
            }

            if (ev.content.empty()) {
                ++stats.rows_dropped_empty;
                continue;
            }
            note_timestamp(ev, stats);
            ++stats.rows_emitted;
            result.events.push_back(std::move(ev));
        }
    }

    result.stats.add_file(source_name, stats);
    return result;
}

ParseResult parse_generic_events(std::istream& in, bool strict, const std::string& source_name) {
    ParseResult result;
    FileParseStats stats;

    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++stats.rows_read;

        auto malformed = [&](const std::string& why) {
            if (strict)
                throw AuditError(AuditError::Kind::MalformedRecord,
                                 source_name + " line " + std::to_string(line_no) + ": " + why);
            ++stats.rows_malformed;
        };

        if (!valid_utf8(line)) {
            malformed("invalid UTF-8");
            continue;
        }
        ordered_json rec = ordered_json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object()) {
            malformed("not a JSON object");
            continue;
        }
        if (!rec.contains("platform") || !rec.contains("author_id") || !rec.contains("content") ||
            !rec["platform"].is_string() || !rec["content"].is_string()) {
            malformed("missing required key (platform, author_id, content)");
            continue;
        }

        RawEvent ev;
        ev.platform_label = lower(trim(rec["platform"].get<std::string>()));
        if (ev.platform_label == "midjourney" || ev.platform_label == "midjourney_discord")
            ev.platform = Platform::MidjourneyDiscord;
        else if (ev.platform_label == "chatgpt" || ev.platform_label == "chatgpt_export")
            ev.platform = Platform::ChatGPTExport;
        else
            ev.platform = Platform::GenericEvents;
        ev.author_id = json_string(rec["author_id"]);
        ev.content = trim(rec["content"].get<std::string>());

        if (rec.contains("timestamp") && rec["timestamp"].is_string()) {
            auto ts = parse_timestamp(rec["timestamp"].get<std::string>());
            if (!ts) {
                malformed("unparseable timestamp");
                continue;
            }
            ev.timestamp = *ts;
        }
        if (rec.contains("session_id") && rec["session_id"].is_string())
            ev.session_id = rec["session_id"].get<std::string>();
        if (rec.contains("role") && rec["role"].is_string())
            ev.role_hint = lower(rec["role"].get<std::string>());
        if (rec.contains("media") && rec["media"].is_string())
            ev.media = lower(rec["media"].get<std::string>());
        if (rec.contains("image_count")) {
            if (!rec["image_count"].is_number_integer() ||
                rec["image_count"].get<std::int64_t>() < 0) {
                malformed("image_count must be a non-negative integer");
                continue;
            }
            ev.precount = rec["image_count"].get<std::int64_t>();
        }

        if (ev.content.empty()) {
            ++stats.rows_dropped_empty;
            continue;
        }
        note_timestamp(ev, stats);
        ++stats.rows_emitted;
        result.events.push_back(std::move(ev));
    }

    result.stats.add_file(source_name, stats);
    return result;
}

}  // namespace footprint
