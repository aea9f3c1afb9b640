#include "footprint/classify.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

namespace footprint {
namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool contains(const std::string& haystack, const std::string& needle, bool case_insensitive) {
    if (needle.empty()) return true;
    if (!case_insensitive) return haystack.find(needle) != std::string::npos;
    return lower(haystack).find(lower(needle)) != std::string::npos;
}

// "image #" should also hit "image#2" under lenient spacing.
std::string strip_spaces_around_hash(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == ' ' && i + 1 < s.size() && s[i + 1] == '#') continue;
        out.push_back(s[i]);
    }
    return out;
}

}  // namespace

std::string_view kind_name(GenerationKind k) {
    switch (k) {
        case GenerationKind::GridGeneration: return "grid_generation";
        case GenerationKind::SingleSelection: return "single_selection";
        case GenerationKind::Variation: return "variation";
        case GenerationKind::Failed: return "failed";
        case GenerationKind::DalleMention: return "dalle_mention";
        case GenerationKind::Precounted: return "precounted";
    }
    return "unknown";
}

std::string_view role_name(ActorRole r) {
    switch (r) {
        case ActorRole::TeacherPreparation: return "teacher_preparation";
        case ActorRole::TeacherSupport: return "teacher_support";
        case ActorRole::Student: return "student";
        case ActorRole::Unknown: return "unknown";
    }
    return "unknown";
}

std::optional<ActorRole> parse_role(std::string_view name) {
    if (name == "teacher_preparation") return ActorRole::TeacherPreparation;
    if (name == "teacher_support") return ActorRole::TeacherSupport;
    if (name == "student") return ActorRole::Student;
    if (name == "unknown") return ActorRole::Unknown;
    return std::nullopt;
}

ActorRole ActorMap::role_of(const RawEvent& event) const {
    if (teacher_ids.count(event.author_id)) {
        if (workshop_window && event.timestamp) {
            bool inside = !(*event.timestamp < workshop_window->first) &&
                          *event.timestamp < workshop_window->second;
            return inside ? ActorRole::TeacherSupport : ActorRole::TeacherPreparation;
        }
        if (event.role_hint) {
            if (auto r = parse_role(*event.role_hint)) return *r;
        }
        return ActorRole::TeacherPreparation;
    }
    if (student_ids.count(event.author_id)) return ActorRole::Student;
    if (event.role_hint) {
        if (auto r = parse_role(*event.role_hint)) return *r;
    }
    return default_role;
}

RuleSet RuleSet::midjourney_defaults() {
    RuleSet rs;
    rs.rules = {
        {Rule::Match::LacksCommandPrefix, "", GenerationKind::Failed, 0},
        {Rule::Match::Contains, "image #", GenerationKind::SingleSelection, 1},
        {Rule::Match::Contains, "variation", GenerationKind::Variation, 1},
        {Rule::Match::Always, "", GenerationKind::GridGeneration, 4},
    };
    return rs;
}

const Rule& RuleSet::match(const std::string& content) const {
    for (const Rule& rule : rules) {
        switch (rule.match) {
            case Rule::Match::Always:
                return rule;
            case Rule::Match::LacksCommandPrefix:
                if (!contains(content, command_prefix, case_insensitive)) return rule;
                break;
            case Rule::Match::Contains:
                if (contains(content, rule.needle, case_insensitive)) return rule;
                if (lenient_spacing && rule.needle.find(" #") != std::string::npos &&
                    contains(content, strip_spaces_around_hash(rule.needle), case_insensitive))
                    return rule;
                break;
        }
    }
    // The rule list must end with a catch-all; fall back to Failed/0 so the
    // mapping stays total even for a misconfigured set.
    static const Rule fallback{Rule::Match::Always, "", GenerationKind::Failed, 0};
    return fallback;
}

std::int64_t count_dalle_mentions(const std::string& content, bool case_insensitive) {
    const std::string needle = "dall-e";
    std::string hay = case_insensitive ? lower(content) : content;
    std::string n = case_insensitive ? needle : "DALL-E";
    std::int64_t count = 0;
    for (size_t pos = hay.find(n); pos != std::string::npos; pos = hay.find(n, pos + n.size()))
        ++count;
    return count;
}

GenerationEvent classify_event(const RawEvent& event, const RuleSet& rules,
                               const ActorMap& actors) {
    GenerationEvent out;
    out.platform = event.platform;
    out.platform_label = event.platform_label;
    out.media = event.media;
    out.author_id = event.author_id;
    out.timestamp = event.timestamp;
    out.role = actors.role_of(event);

    if (event.precount) {
        out.kind = GenerationKind::Precounted;
        out.image_count = *event.precount;
        return out;
    }

    if (event.platform == Platform::ChatGPTExport) {
        // Chat exports are counted by DALL-E mentions in model-authored
        // messages; everything else generated no image.
        bool model_authored =
            event.chat_role && (*event.chat_role == "assistant" || *event.chat_role == "tool");
        std::int64_t mentions =
            model_authored ? count_dalle_mentions(event.content, rules.case_insensitive) : 0;
        if (mentions > 0) {
            out.kind = GenerationKind::DalleMention;
            out.image_count = mentions * rules.dalle_images;
        } else {
            out.kind = GenerationKind::Failed;
            out.image_count = 0;
        }
        return out;
    }

    const Rule& rule = rules.match(event.content);
    out.kind = rule.kind;
    out.image_count = rule.images;
    return out;
}

void ClassifyStats::merge(const ClassifyStats& other) {
    for (const auto& [k, v] : other.events_by_kind) events_by_kind[k] += v;
    for (const auto& [k, v] : other.events_by_role) events_by_role[k] += v;
    for (const auto& [k, v] : other.images_by_role) images_by_role[k] += v;
    total_events += other.total_events;
    total_images += other.total_images;
    unknown_role_events += other.unknown_role_events;
    duplicates_collapsed += other.duplicates_collapsed;
}

ClassifyResult classify_all(const std::vector<RawEvent>& events, const RuleSet& rules,
                            const ActorMap& actors, bool dedupe) {
    ClassifyResult result;
    std::set<std::tuple<std::string, std::int64_t, std::string>> seen;

    for (const RawEvent& raw : events) {
        if (dedupe) {
            auto key = std::make_tuple(raw.author_id,
                                       raw.timestamp ? raw.timestamp->epoch_seconds
                                                     : std::int64_t{-1},
                                       raw.content);
            if (!seen.insert(key).second) {
                ++result.stats.duplicates_collapsed;
                continue;
            }
        }
        GenerationEvent ev = classify_event(raw, rules, actors);
        ++result.stats.events_by_kind[ev.kind];
        ++result.stats.events_by_role[ev.role];
        result.stats.images_by_role[ev.role] += ev.image_count;
        ++result.stats.total_events;
        result.stats.total_images += ev.image_count;
        if (ev.role == ActorRole::Unknown) ++result.stats.unknown_role_events;
        result.events.push_back(std::move(ev));
    }
    return result;
}

}  // namespace footprint
