#include "footprint/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "footprint/digest.hpp"
#include "footprint/errors.hpp"

namespace footprint {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& why) {
    throw AuditError(AuditError::Kind::ConfigError, where + ": " + why);
}

// Flags keys outside `known`; error under strict, warning otherwise.
void check_keys(const json& obj, const std::set<std::string>& known, const std::string& where,
                bool strict, std::vector<std::string>& warnings) {
    for (const auto& [key, _] : obj.items()) {
        if (known.count(key)) continue;
        std::string msg = where + ": unknown key '" + key + "'";
        if (strict) fail(where, "unknown key '" + key + "'");
        warnings.push_back(msg);
    }
}

Decimal get_decimal(const json& v, const std::string& where) {
    try {
        if (v.is_string()) return Decimal::parse(v.get<std::string>());
        if (v.is_number_integer()) return Decimal::from_int(v.get<std::int64_t>());
        if (v.is_number_float()) {
            // floats are accepted but canonicalized through their shortest
            // printed form, so "0.05" and 0.05 agree
            std::ostringstream os;
            os << v.get<double>();
            return Decimal::parse(os.str());
        }
    } catch (const DecimalError& e) {
        fail(where, e.what());
    }
    fail(where, "expected a decimal (string or number)");
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_string())
        fail(where, std::string("missing string key '") + key + "'");
    return obj[key].get<std::string>();
}

Timestamp get_timestamp(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where, "expected an ISO-8601 string");
    auto ts = parse_timestamp(v.get<std::string>());
    if (!ts) fail(where, "unparseable timestamp '" + v.get<std::string>() + "'");
    return *ts;
}

void load_actors(const json& j, ActorMap& actors, bool strict,
                 std::vector<std::string>& warnings) {
    check_keys(j, {"teacher_ids", "student_ids", "default_role", "workshop_window"}, "actors",
               strict, warnings);
    if (j.contains("teacher_ids"))
        for (const auto& id : j["teacher_ids"]) actors.teacher_ids.insert(id.get<std::string>());
    if (j.contains("student_ids"))
        for (const auto& id : j["student_ids"]) actors.student_ids.insert(id.get<std::string>());
    for (const auto& id : actors.teacher_ids) {
        if (actors.student_ids.count(id))
            fail("actors", "author '" + id + "' is listed as both teacher and student");
    }
    if (j.contains("default_role")) {
        auto r = parse_role(j["default_role"].get<std::string>());
        if (!r) fail("actors.default_role", "unknown role");
        actors.default_role = *r;
    }
    if (j.contains("workshop_window")) {
        const auto& w = j["workshop_window"];
        check_keys(w, {"start", "end"}, "actors.workshop_window", strict, warnings);
        Timestamp start = get_timestamp(w["start"], "actors.workshop_window.start");
        Timestamp end = get_timestamp(w["end"], "actors.workshop_window.end");
        if (!(start < end)) fail("actors.workshop_window", "start must precede end");
        actors.workshop_window = {start, end};
    }
}

GenerationKind get_kind(const std::string& name, const std::string& where) {
    for (GenerationKind k :
         {GenerationKind::GridGeneration, GenerationKind::SingleSelection,
          GenerationKind::Variation, GenerationKind::Failed, GenerationKind::DalleMention,
          GenerationKind::Precounted}) {
        if (kind_name(k) == name) return k;
    }
    fail(where, "unknown generation kind '" + name + "'");
}

void load_rules(const json& j, RuleSet& rules, bool strict, std::vector<std::string>& warnings) {
    check_keys(j,
               {"command_prefix", "case_insensitive", "lenient_spacing", "variation_images",
                "dalle_images", "custom"},
               "rules", strict, warnings);
    if (j.contains("command_prefix")) rules.command_prefix = j["command_prefix"].get<std::string>();
    if (j.contains("case_insensitive")) rules.case_insensitive = j["case_insensitive"].get<bool>();
    if (j.contains("lenient_spacing")) rules.lenient_spacing = j["lenient_spacing"].get<bool>();
    if (j.contains("dalle_images")) rules.dalle_images = j["dalle_images"].get<std::int64_t>();
    if (j.contains("variation_images")) {
        std::int64_t n = j["variation_images"].get<std::int64_t>();
        if (n < 0) fail("rules.variation_images", "must be non-negative");
        for (Rule& r : rules.rules)
            if (r.kind == GenerationKind::Variation) r.images = n;
    }
    if (j.contains("custom")) {
        rules.rules.clear();
        size_t i = 0;
        for (const auto& rj : j["custom"]) {
            std::string where = "rules.custom[" + std::to_string(i++) + "]";
            check_keys(rj, {"match", "needle", "kind", "images"}, where, strict, warnings);
            Rule r;
            std::string match = get_string(rj, "match", where);
            if (match == "contains") r.match = Rule::Match::Contains;
            else if (match == "lacks_command_prefix") r.match = Rule::Match::LacksCommandPrefix;
            else if (match == "always") r.match = Rule::Match::Always;
            else fail(where, "unknown match kind '" + match + "'");
            if (rj.contains("needle")) r.needle = rj["needle"].get<std::string>();
            r.kind = get_kind(get_string(rj, "kind", where), where);
            if (!rj.contains("images") || !rj["images"].is_number_integer() ||
                rj["images"].get<std::int64_t>() < 0)
                fail(where, "images must be a non-negative integer");
            r.images = rj["images"].get<std::int64_t>();
            rules.rules.push_back(std::move(r));
        }
        if (rules.rules.empty() || rules.rules.back().match != Rule::Match::Always)
            fail("rules.custom", "rule list must end with an 'always' catch-all");
    }
}

void load_factor_entries(const json& j, EnergyFactorTable& table, bool strict,
                         std::vector<std::string>& warnings) {
    check_keys(j, {"entries"}, "factors", strict, warnings);
    if (!j.contains("entries")) return;
    size_t i = 0;
    for (const auto& ej : j["entries"]) {
        std::string where = "factors.entries[" + std::to_string(i++) + "]";
        check_keys(ej, {"platform", "kind", "kwh_per_image", "provenance"}, where, strict,
                   warnings);
        if (!ej.contains("kwh_per_image")) fail(where, "missing 'kwh_per_image'");
        if (!ej.contains("provenance") || !ej["provenance"].is_string() ||
            ej["provenance"].get<std::string>().empty())
            fail(where, "every factor entry needs a non-empty 'provenance'");
        std::string platform = ej.contains("platform") ? ej["platform"].get<std::string>() : "*";
        std::string kind = ej.contains("kind") ? ej["kind"].get<std::string>() : "*";
        Decimal value = get_decimal(ej["kwh_per_image"], where + ".kwh_per_image");
        if (value.is_negative()) fail(where, "kwh_per_image must be non-negative");
        table.set(platform, kind, value, ej["provenance"].get<std::string>());
    }
}

void load_conversions(const json& j, ConversionFactors& out, bool strict,
                      std::vector<std::string>& warnings) {
    check_keys(j, {"grid_carbon_intensity", "water_use_effectiveness"}, "conversions", strict,
               warnings);
    auto load_one = [&](const char* key) -> std::optional<ConversionFactor> {
        if (!j.contains(key)) return std::nullopt;
        const auto& f = j[key];
        std::string where = std::string("conversions.") + key;
        check_keys(f, {"value", "provenance"}, where, strict, warnings);
        ConversionFactor cf;
        cf.value = get_decimal(f["value"], where + ".value");
        if (cf.value.is_negative() || cf.value.is_zero()) fail(where, "value must be positive");
        cf.provenance = get_string(f, "provenance", where);
        if (cf.provenance.empty()) fail(where, "provenance must be non-empty");
        return cf;
    };
    out.grid_carbon_intensity = load_one("grid_carbon_intensity");
    out.water_use_effectiveness = load_one("water_use_effectiveness");
}

void load_budget(const json& j, BudgetSpec& spec, bool strict,
                 std::vector<std::string>& warnings) {
    check_keys(j, {"scope", "max_trials", "max_kwh", "mode", "count_failed"}, "budget", strict,
               warnings);
    if (j.contains("scope")) {
        std::string s = j["scope"].get<std::string>();
        if (s == "global") spec.scope = BudgetScope::Global;
        else if (s == "per_role") spec.scope = BudgetScope::PerRole;
        else if (s == "per_author") spec.scope = BudgetScope::PerAuthor;
        else fail("budget.scope", "unknown scope '" + s + "'");
    }
    if (j.contains("max_trials")) {
        std::int64_t n = j["max_trials"].get<std::int64_t>();
        if (n <= 0) fail("budget.max_trials", "must be positive");
        spec.max_trials = n;
    }
    if (j.contains("max_kwh")) {
        Decimal d = get_decimal(j["max_kwh"], "budget.max_kwh");
        if (d.is_negative() || d.is_zero()) fail("budget.max_kwh", "must be positive");
        spec.max_kwh = d;
    }
    if (j.contains("mode")) {
        std::string m = j["mode"].get<std::string>();
        if (m == "report") spec.mode = BudgetMode::Report;
        else if (m == "enforce") spec.mode = BudgetMode::Enforce;
        else fail("budget.mode", "unknown mode '" + m + "'");
    }
    if (j.contains("count_failed")) spec.count_failed = j["count_failed"].get<bool>();
    if (!spec.max_trials && !spec.max_kwh)
        fail("budget", "at least one of max_trials / max_kwh is required");
}

}  // namespace

std::string_view input_format_name(InputFormat f) {
    switch (f) {
        case InputFormat::DiscordCsv: return "discord_csv";
        case InputFormat::ChatGPTExport: return "chatgpt_export";
        case InputFormat::GenericEvents: return "generic_events";
    }
    return "generic_events";
}

RunConfig load_config(const std::string& path, std::optional<bool> strict_override) {
    std::ifstream in(path);
    if (!in) throw AuditError(AuditError::Kind::IoError, "cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();

    json root;
    try {
        root = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        fail(path, std::string("not valid JSON (") + e.what() + ")");
    }
    if (!root.is_object()) fail(path, "top level must be an object");

    RunConfig cfg;
    if (root.contains("strict")) cfg.strict = root["strict"].get<bool>();
    if (strict_override) cfg.strict = *strict_override;
    if (root.contains("dedupe")) cfg.dedupe = root["dedupe"].get<bool>();

    check_keys(root,
               {"inputs", "actors", "rules", "factors", "session", "manifest", "baselines",
                "conversions", "budget", "csv", "strict", "dedupe"},
               path, cfg.strict, cfg.warnings);

    std::filesystem::path base = std::filesystem::path(path).parent_path();
    if (root.contains("inputs")) {
        size_t i = 0;
        for (const auto& ij : root["inputs"]) {
            std::string where = "inputs[" + std::to_string(i++) + "]";
            check_keys(ij, {"path", "format"}, where, cfg.strict, cfg.warnings);
            InputSpec spec;
            std::filesystem::path p = get_string(ij, "path", where);
            if (p.is_relative()) p = base / p;
            spec.path = p.string();
            std::string fmt = get_string(ij, "format", where);
            if (fmt == "discord_csv") spec.format = InputFormat::DiscordCsv;
            else if (fmt == "chatgpt_export") spec.format = InputFormat::ChatGPTExport;
            else if (fmt == "generic_events") spec.format = InputFormat::GenericEvents;
            else fail(where, "unknown format '" + fmt + "'");
            if (!std::filesystem::exists(spec.path))
                fail(where, "input file '" + spec.path + "' does not exist");
            cfg.inputs.push_back(std::move(spec));
        }
    }

    if (root.contains("actors")) load_actors(root["actors"], cfg.actors, cfg.strict, cfg.warnings);
    if (root.contains("rules")) load_rules(root["rules"], cfg.rules, cfg.strict, cfg.warnings);
    if (root.contains("factors"))
        load_factor_entries(root["factors"], cfg.factors, cfg.strict, cfg.warnings);

    if (root.contains("session")) {
        const auto& sj = root["session"];
        check_keys(sj, {"duration_hours", "n_students", "label"}, "session", cfg.strict,
                   cfg.warnings);
        SessionInfo session;
        session.duration_hours = get_decimal(sj["duration_hours"], "session.duration_hours");
        if (session.duration_hours.is_zero() || session.duration_hours.is_negative())
            fail("session.duration_hours", "must be positive");
        if (!sj.contains("n_students") || !sj["n_students"].is_number_integer() ||
            sj["n_students"].get<std::int64_t>() < 1)
            fail("session.n_students", "must be an integer >= 1");
        session.n_students = sj["n_students"].get<std::int64_t>();
        if (sj.contains("label")) session.label = sj["label"].get<std::string>();
        cfg.session = session;
    }

    if (root.contains("manifest")) {
        for (const auto& [role_key, count] : root["manifest"].items()) {
            auto role = parse_role(role_key);
            if (!role) fail("manifest", "unknown role '" + role_key + "'");
            if (!count.is_number_integer() || count.get<std::int64_t>() < 0)
                fail("manifest." + role_key, "must be a non-negative integer");
            cfg.manifest.used_counts[*role] = count.get<std::int64_t>();
        }
    }

    if (root.contains("baselines")) {
        size_t i = 0;
        for (const auto& bj : root["baselines"]) {
            std::string where = "baselines[" + std::to_string(i++) + "]";
            check_keys(bj, {"name", "kwh", "per", "source_note"}, where, cfg.strict, cfg.warnings);
            Baseline b;
            b.name = get_string(bj, "name", where);
            b.kwh = get_decimal(bj["kwh"], where + ".kwh");
            auto per = parse_period(get_string(bj, "per", where));
            if (!per) fail(where + ".per", "expected hour|day|year|unit");
            b.per = *per;
            if (bj.contains("source_note")) b.source_note = bj["source_note"].get<std::string>();
            cfg.baselines.add(std::move(b));
        }
    }

    if (root.contains("conversions"))
        load_conversions(root["conversions"], cfg.conversions, cfg.strict, cfg.warnings);

    if (root.contains("budget")) {
        BudgetSpec spec;
        load_budget(root["budget"], spec, cfg.strict, cfg.warnings);
        cfg.budget = spec;
    }

    if (root.contains("csv")) {
        const auto& cj = root["csv"];
        check_keys(cj, {"delimiter"}, "csv", cfg.strict, cfg.warnings);
        if (cj.contains("delimiter")) {
            std::string d = cj["delimiter"].get<std::string>();
            if (d.size() != 1 || (d != "," && d != "\t" && d != ";"))
                fail("csv.delimiter", "must be one of ',' '\\t' ';'");
            cfg.csv.delimiter = d[0];
        }
    }
    cfg.csv.strict = cfg.strict;

    // json (as opposed to ordered_json) sorts keys, so the dump is a
    // canonical form independent of key order and formatting in the file.
    cfg.digest = sha256_hex(root.dump());
    return cfg;
}

EnergyFactorTable parse_factor_table(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail("factor table", std::string("not valid JSON (") + e.what() + ")");
    }
    if (!root.is_object() || !root.contains("entries"))
        fail("factor table", "expected an object with an 'entries' array");
    EnergyFactorTable table;  // standalone tables start empty, no defaults
    std::vector<std::string> warnings;
    load_factor_entries(root, table, true, warnings);
    return table;
}

}  // namespace footprint
