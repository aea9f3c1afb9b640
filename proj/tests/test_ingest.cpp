#include <doctest.h>

#include <random>
#include <sstream>

#include "footprint/errors.hpp"
#include "footprint/ingest.hpp"
#include "support/oracle.hpp"

using namespace footprint;

namespace {

ParseResult discord(const std::string& text, CsvOptions opts = {}) {
    std::istringstream in(text);
    return parse_discord_csv(in, opts);
}

ParseResult chatgpt(const std::string& text) {
    std::istringstream in(text);
    return parse_chatgpt_export(in);
}

ParseResult generic(const std::string& text, bool strict = false) {
    std::istringstream in(text);
    return parse_generic_events(in, strict);
}

}  // namespace

TEST_CASE("discord csv: basic transcription") {
    auto r = discord("author_id,content\nu1,\"/imagine a red chair\"\nu2,\"hello\"\n");
    REQUIRE(r.events.size() == 2);
    CHECK(r.events[0].author_id == "u1");
    CHECK(r.events[0].content == "/imagine a red chair");
    CHECK(r.events[0].platform == Platform::MidjourneyDiscord);
    CHECK(r.stats.totals.rows_read == 2);
    CHECK(r.stats.totals.rows_emitted == 2);
}

TEST_CASE("discord csv: header-only file") {
    auto r = discord("author_id,content\n");
    CHECK(r.events.empty());
    CHECK(r.stats.totals.rows_read == 0);
}

TEST_CASE("discord csv: missing required column") {
    CHECK_THROWS_AS(discord("author_id,when\nu1,now\n"), AuditError);
    CHECK_THROWS_AS(discord(""), AuditError);
}

TEST_CASE("discord csv: header aliases and case") {
    auto r = discord("Author,Message\nu1,/imagine a dog\n");
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].author_id == "u1");
}

TEST_CASE("discord csv: optional columns") {
    auto r = discord(
        "author_id,author_name,timestamp,content,channel\n"
        "u1,Ada,2024-03-01T10:00:00Z,/imagine a cat,general\n");
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].author_name == "Ada");
    CHECK(r.events[0].session_id == "general");
    REQUIRE(r.events[0].timestamp);
    CHECK_FALSE(r.events[0].timestamp->tz_was_missing);
}

TEST_CASE("discord csv: timestamp without timezone is flagged") {
    auto r = discord("author_id,timestamp,content\nu1,2024-03-01T10:00:00,/imagine x\n");
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].timestamp->tz_was_missing);
    CHECK(r.stats.totals.timestamps_missing_tz == 1);
}

TEST_CASE("discord csv: malformed rows, strict vs lenient") {
    std::string text = "author_id,content\nu1,/imagine ok\nu2,too,many,fields\n";
    auto lenient = discord(text);
    CHECK(lenient.events.size() == 1);
    CHECK(lenient.stats.totals.rows_malformed == 1);
    CHECK(lenient.stats.conserved());

    CsvOptions strict;
    strict.strict = true;
    CHECK_THROWS_AS(discord(text, strict), AuditError);
}

TEST_CASE("discord csv: invalid utf-8") {
    std::string text = "author_id,content\nu1,/imagine \xFF\xFE broken\n";
    auto lenient = discord(text);
    CHECK(lenient.stats.totals.rows_malformed == 1);
    CsvOptions strict;
    strict.strict = true;
    CHECK_THROWS_AS(discord(text, strict), AuditError);
}

TEST_CASE("discord csv: quoted fields with embedded delimiter and newline") {
    auto r = discord("author_id,content\nu1,\"/imagine a red, shiny chair\"\nu2,\"line one\nline two\"\n");
    REQUIRE(r.events.size() == 2);
    CHECK(r.events[0].content == "/imagine a red, shiny chair");
    CHECK(r.events[1].content == "line one\nline two");
    CHECK(r.stats.totals.rows_read == 2);
}

TEST_CASE("discord csv: semicolon delimiter") {
    CsvOptions opts;
    opts.delimiter = ';';
    auto r = discord("author_id;content\nu1;/imagine a 0,05 kWh chair\n", opts);
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].content == "/imagine a 0,05 kWh chair");
}

TEST_CASE("discord csv: 200-row synthetic export with blank rows") {
    // Fixture counted by the independent scanner, not by the parser.
    std::string text = "author_id,content\n";
    std::mt19937 rng(7);
    int blanks_placed = 0;
    for (int i = 0; i < 200; ++i) {
        bool blank = (i == 17 || i == 91 || i == 160);
        blanks_placed += blank;
        text += "u" + std::to_string(rng() % 9) + ",";
        if (!blank) text += "/imagine prompt " + std::to_string(i);
        text += "\n";
    }
    auto oracle = testsupport::scan_discord_csv(text);
    REQUIRE(oracle.rows == 200);
    REQUIRE(oracle.blank == 3);

    auto r = discord(text);
    CHECK(r.stats.totals.rows_read == 200);
    CHECK(r.events.size() == 197);
    CHECK(r.stats.totals.rows_dropped_empty == oracle.blank);
    CHECK(r.stats.conserved());
}

TEST_CASE("chatgpt export: one conversation, four messages") {
    std::string text = R"json({
      "conversations": [{
        "id": "conv-1",
        "messages": [
          {"author": {"role": "user"}, "content": {"parts": ["make me a logo"]}},
          {"author": {"role": "assistant"}, "content": {"parts": ["Here it is (DALL-E)"]}},
          {"author": {"role": "user"}, "content": "another one please"},
          {"author": {"role": "assistant"}, "content": {"parts": ["Sure (DALL-E)"]}}
        ]
      }]
    })json";
    auto r = chatgpt(text);
    REQUIRE(r.events.size() == 4);
    for (const auto& ev : r.events) {
        CHECK(ev.platform == Platform::ChatGPTExport);
        CHECK(ev.session_id == "conv-1");
    }
    CHECK(r.events[0].chat_role == "user");
    CHECK(r.events[1].chat_role == "assistant");
}

TEST_CASE("chatgpt export: zero conversations") {
    auto r = chatgpt("[]");
    CHECK(r.events.empty());
    CHECK(r.stats.totals.rows_read == 0);
}

TEST_CASE("chatgpt export: two conversations, distinct session ids") {
    std::string text = R"([
      {"id": "a", "messages": [
        {"role": "user", "content": "1"}, {"role": "assistant", "content": "2"},
        {"role": "user", "content": "3"}]},
      {"id": "b", "messages": [
        {"role": "user", "content": "1"}, {"role": "assistant", "content": "2"},
        {"role": "user", "content": "3"}, {"role": "assistant", "content": "4"},
        {"role": "user", "content": "5"}]}
    ])";
    auto r = chatgpt(text);
    REQUIRE(r.events.size() == 8);
    int a = 0, b = 0;
    for (const auto& ev : r.events) {
        if (ev.session_id == "a") ++a;
        if (ev.session_id == "b") ++b;
    }
    CHECK(a == 3);
    CHECK(b == 5);
}

TEST_CASE("chatgpt export: mapping nodes ordered by create_time") {
    std::string text = R"([{
      "conversation_id": "c",
      "mapping": {
        "n2": {"message": {"author": {"role": "assistant"}, "create_time": 200.0,
                           "content": {"parts": ["second"]}}},
        "n1": {"message": {"author": {"role": "user"}, "create_time": 100.0,
                           "content": {"parts": ["first"]}}},
        "root": {"message": null}
      }
    }])";
    auto r = chatgpt(text);
    REQUIRE(r.events.size() == 2);
    CHECK(r.events[0].content == "first");
    CHECK(r.events[1].content == "second");
    CHECK(r.events[0].timestamp->epoch_seconds == 100);
}

TEST_CASE("chatgpt export: schema mismatch reports path") {
    CHECK_THROWS_AS(chatgpt("{\"foo\": 1}"), AuditError);
    CHECK_THROWS_AS(chatgpt("42"), AuditError);
    CHECK_THROWS_AS(chatgpt("not json"), AuditError);
    try {
        chatgpt("[{\"id\": \"x\"}]");
        FAIL("expected SchemaMismatch");
    } catch (const AuditError& e) {
        CHECK(std::string(e.what()).find("$[0]") != std::string::npos);
    }
}

TEST_CASE("generic events: precounted record") {
    auto r = generic(R"({"platform":"leonardo","author_id":"u1","content":"batch","image_count":4})"
                     "\n");
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].precount == 4);
    CHECK(r.events[0].platform_label == "leonardo");
    CHECK(r.events[0].platform == Platform::GenericEvents);
}

TEST_CASE("generic events: empty file") {
    auto r = generic("");
    CHECK(r.events.empty());
    CHECK(r.stats.totals.rows_read == 0);
}

TEST_CASE("generic events: mixed records, lenient vs strict") {
    std::string text;
    for (int i = 0; i < 8; ++i)
        text += R"({"platform":"midjourney","author_id":"u","content":"/imagine x"})" "\n";
    text += "{broken\n";
    text += R"({"platform":"midjourney","author_id":"u"})" "\n";  // missing content
    auto r = generic(text);
    CHECK(r.events.size() == 8);
    CHECK(r.stats.totals.rows_read == 10);
    CHECK(r.stats.totals.rows_malformed == 2);
    CHECK(r.stats.conserved());
    CHECK_THROWS_AS(generic(text, true), AuditError);
}

TEST_CASE("generic events: platform mapping and extras") {
    auto r = generic(
        R"({"platform":"midjourney","author_id":"t","content":"x","role":"teacher_support","media":"image","timestamp":"2024-03-01T09:00:00Z","session_id":"ch1"})"
        "\n");
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].platform == Platform::MidjourneyDiscord);
    CHECK(r.events[0].role_hint == "teacher_support");
    CHECK(r.events[0].session_id == "ch1");
}

TEST_CASE("parsers are deterministic and order preserving") {
    std::string text = "author_id,content\n";
    for (int i = 0; i < 50; ++i) text += "u" + std::to_string(i) + ",/imagine p" + std::to_string(i) + "\n";
    auto a = discord(text);
    auto b = discord(text);
    REQUIRE(a.events.size() == b.events.size());
    for (size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].content == b.events[i].content);
        CHECK(a.events[i].content == "/imagine p" + std::to_string(i));
    }
}

TEST_CASE("conservation holds on randomly corrupted csv") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 25; ++trial) {
        std::string text = "author_id,content\n";
        int rows = 1 + static_cast<int>(rng() % 40);
        for (int i = 0; i < rows; ++i) {
            switch (rng() % 4) {
                case 0: text += "u,/imagine ok\n"; break;
                case 1: text += "u,\n"; break;                    // blank content
                case 2: text += "u,too,many,fields\n"; break;     // malformed
                case 3: text += "u,/imagine \xFF bad\n"; break;   // bad encoding
            }
        }
        auto r = discord(text);
        CHECK(r.stats.totals.rows_read == rows);
        CHECK(r.stats.conserved());
    }
}
