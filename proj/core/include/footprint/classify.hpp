#pragma once

// Turns raw log lines into counted generation events: grid-of-4 prompts,
// single selections ("image #"), variations, failed prompts lacking the
// generation command, DALL-E mentions in chat exports, and precounted
// records. Attribution splits teacher activity into preparation and
// in-workshop support.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "footprint/event.hpp"

namespace footprint {

enum class GenerationKind {
    GridGeneration,
    SingleSelection,
    Variation,
    Failed,
    DalleMention,
    Precounted,
};

std::string_view kind_name(GenerationKind k);

enum class ActorRole { TeacherPreparation, TeacherSupport, Student, Unknown };

std::string_view role_name(ActorRole r);
std::optional<ActorRole> parse_role(std::string_view name);

// Maps authors to roles. Teacher events inside the workshop window count as
// support, outside as preparation; events without a usable timestamp fall
// back to the record's explicit role tag, then to preparation.
struct ActorMap {
    std::set<std::string> teacher_ids;
    std::set<std::string> student_ids;
    ActorRole default_role = ActorRole::Unknown;
    std::optional<std::pair<Timestamp, Timestamp>> workshop_window;  // [start, end)

    ActorRole role_of(const RawEvent& event) const;
};

// One classification rule. Rules run in order and the list must end with a
// catch-all (Always), so classification is total.
struct Rule {
    enum class Match { LacksCommandPrefix, Contains, Always };
    Match match = Match::Always;
    std::string needle;
    GenerationKind kind = GenerationKind::GridGeneration;
    std::int64_t images = 0;
};

struct RuleSet {
    std::vector<Rule> rules;
    std::string command_prefix = "/imagine";
    // Lenient matching: case-insensitive, and "image #" also matches the
    // unspaced "image#2" form. Strict matching is exact-substring.
    bool case_insensitive = true;
    bool lenient_spacing = true;
    // Images attributed to one DALL-E mention in a model-authored message.
    std::int64_t dalle_images = 1;

    // The default Midjourney order: missing command -> Failed/0,
    // "image #" -> SingleSelection/1, "variation" -> Variation/1,
    // catch-all -> GridGeneration/4.
    static RuleSet midjourney_defaults();

    const Rule& match(const std::string& content) const;
};

struct GenerationEvent {
    GenerationKind kind = GenerationKind::Failed;
    std::int64_t image_count = 0;
    ActorRole role = ActorRole::Unknown;
    Platform platform = Platform::GenericEvents;
    std::string platform_label;
    std::string media = "image";
    std::string author_id;
    std::optional<Timestamp> timestamp;
};

struct ClassifyStats {
    std::map<GenerationKind, std::int64_t> events_by_kind;
    std::map<ActorRole, std::int64_t> events_by_role;
    std::map<ActorRole, std::int64_t> images_by_role;
    std::int64_t total_events = 0;
    std::int64_t total_images = 0;
    std::int64_t unknown_role_events = 0;
    std::int64_t duplicates_collapsed = 0;

    void merge(const ClassifyStats& other);
};

// Total and deterministic: every RawEvent maps to exactly one event.
GenerationEvent classify_event(const RawEvent& event, const RuleSet& rules,
                               const ActorMap& actors);

struct ClassifyResult {
    std::vector<GenerationEvent> events;
    ClassifyStats stats;
};

// Element-wise classify_event. With dedupe set, repeated
// (author, timestamp, content) triples collapse to their first occurrence.
ClassifyResult classify_all(const std::vector<RawEvent>& events, const RuleSet& rules,
                            const ActorMap& actors, bool dedupe = false);

// Occurrences of "DALL-E" in a model-authored message, per the chat-export
// counting procedure. Case-insensitive under lenient matching.
std::int64_t count_dalle_mentions(const std::string& content, bool case_insensitive);

}  // namespace footprint
