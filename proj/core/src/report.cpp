#include "footprint/report.hpp"

#include <sstream>

#include <json.hpp>

#include "footprint/errors.hpp"

namespace footprint {
namespace {

using nlohmann::ordered_json;

const std::vector<ActorRole> kRoleOrder = {ActorRole::TeacherPreparation,
                                           ActorRole::TeacherSupport, ActorRole::Student,
                                           ActorRole::Unknown};
const std::vector<GenerationKind> kKindOrder = {
    GenerationKind::GridGeneration, GenerationKind::SingleSelection, GenerationKind::Variation,
    GenerationKind::Failed,         GenerationKind::DalleMention,    GenerationKind::Precounted};

std::string percent_display(Decimal rate) { return rate.times(100).fixed(1); }

ordered_json file_stats_json(const FileParseStats& s) {
    ordered_json j;
    j["rows_read"] = s.rows_read;
    j["rows_emitted"] = s.rows_emitted;
    j["rows_dropped_empty"] = s.rows_dropped_empty;
    j["rows_malformed"] = s.rows_malformed;
    j["timestamps_missing_tz"] = s.timestamps_missing_tz;
    j["timestamps_absent"] = s.timestamps_absent;
    return j;
}

FileParseStats file_stats_from_json(const ordered_json& j) {
    FileParseStats s;
    s.rows_read = j.value("rows_read", 0);
    s.rows_emitted = j.value("rows_emitted", 0);
    s.rows_dropped_empty = j.value("rows_dropped_empty", 0);
    s.rows_malformed = j.value("rows_malformed", 0);
    s.timestamps_missing_tz = j.value("timestamps_missing_tz", 0);
    s.timestamps_absent = j.value("timestamps_absent", 0);
    return s;
}

}  // namespace

std::string render_markdown(const AuditReport& r) {
    std::ostringstream md;
    md << "# genAI usage audit";
    if (!r.metadata.session_label.empty()) md << " — " << r.metadata.session_label;
    md << "\n\n";

    md << "## Run metadata\n\n";
    md << "- tool version: " << r.metadata.tool_version << "\n";
    md << "- config digest: `" << r.metadata.config_digest << "`\n";
    for (const auto& [path, digest] : r.metadata.input_digests)
        md << "- input `" << path << "`: `" << digest << "`\n";
    if (r.metadata.run_timestamp)
        md << "- run timestamp: " << format_timestamp(*r.metadata.run_timestamp) << "\n";
    md << "\n";

    md << "## Inputs\n\n";
    md << "| file | rows read | emitted | dropped empty | malformed |\n";
    md << "|---|---|---|---|---|\n";
    for (const auto& [file, s] : r.parse_stats.per_file)
        md << "| " << file << " | " << s.rows_read << " | " << s.rows_emitted << " | "
           << s.rows_dropped_empty << " | " << s.rows_malformed << " |\n";
    const auto& t = r.parse_stats.totals;
    md << "| **total** | " << t.rows_read << " | " << t.rows_emitted << " | "
       << t.rows_dropped_empty << " | " << t.rows_malformed << " |\n\n";

    md << "## Classification\n\n";
    md << "| kind | events |\n|---|---|\n";
    for (GenerationKind k : kKindOrder) {
        auto it = r.classify_stats.events_by_kind.find(k);
        if (it != r.classify_stats.events_by_kind.end())
            md << "| " << kind_name(k) << " | " << it->second << " |\n";
    }
    md << "\n| role | events | images |\n|---|---|---|\n";
    for (ActorRole role : kRoleOrder) {
        auto it = r.classify_stats.events_by_role.find(role);
        if (it == r.classify_stats.events_by_role.end()) continue;
        auto img = r.classify_stats.images_by_role.find(role);
        md << "| " << role_name(role) << " | " << it->second << " | "
           << (img == r.classify_stats.images_by_role.end() ? 0 : img->second) << " |\n";
    }
    if (r.classify_stats.duplicates_collapsed > 0)
        md << "\nDuplicates collapsed: " << r.classify_stats.duplicates_collapsed << "\n";
    md << "\n";

    md << "## Energy ledger\n\n";
    md << "**" << r.ledger.totals.total_images << " images, "
       << r.ledger.totals.total_kwh.str() << " kWh** (displayed "
       << r.ledger.totals.total_kwh.fixed(2) << " kWh)\n\n";
    md << "| role | images | kWh (exact) | kWh |\n|---|---|---|---|\n";
    for (ActorRole role : kRoleOrder) {
        auto it = r.ledger.totals.per_role.find(role);
        if (it == r.ledger.totals.per_role.end()) continue;
        md << "| " << role_name(role) << " | " << it->second.images << " | "
           << it->second.kwh.str() << " | " << it->second.kwh.fixed(2) << " |\n";
    }
    md << "\n";
    for (const std::string& p : r.ledger.totals.provenance) md << "Factor: " << p << "\n";
    md << "\n";

    bool have_rates = !r.ledger.rates.conversion_rates.empty() ||
                      r.ledger.rates.avg_kwh_per_student.has_value();
    if (have_rates) {
        md << "## Derived rates\n\n";
        for (ActorRole role : kRoleOrder) {
            auto it = r.ledger.rates.conversion_rates.find(role);
            if (it == r.ledger.rates.conversion_rates.end()) continue;
            md << "- conversion rate (" << role_name(role) << "): "
               << percent_display(it->second) << "% (exact " << it->second.str() << ")\n";
        }
        if (r.ledger.rates.avg_kwh_per_student)
            md << "- average per student: " << r.ledger.rates.avg_kwh_per_student->fixed(2)
               << " kWh (exact " << r.ledger.rates.avg_kwh_per_student->str() << ")\n";
        if (r.ledger.rates.kwh_per_student_hour)
            md << "- genAI workshop per student-hour: "
               << r.ledger.rates.kwh_per_student_hour->fixed(2) << " kWh (exact "
               << r.ledger.rates.kwh_per_student_hour->str() << ")\n";
        md << "\n";
    }

    if (r.session && r.ledger.rates.kwh_per_student_hour) {
        md << "## Practice comparison table\n\n";
        md << "| practice | kWh |\n|---|---|\n";
        md << "| 1 hour of genAI workshop per student | "
           << r.ledger.rates.kwh_per_student_hour->fixed(2) << " |\n";
        md << "| Mid-range image rendering for 1 hour | 0.07 |\n";
        md << "| Laptop use for 1 hour | 0.054 |\n\n";
    }

    if (!r.comparisons.comparisons.empty() || !r.comparisons.skipped.empty()) {
        md << "## Context\n\n";
        for (const Comparison& c : r.comparisons.comparisons)
            md << "- " << c.statement << " (exact ratio " << c.ratio.str() << ")\n";
        for (const SkippedBaseline& s : r.comparisons.skipped)
            md << "- skipped '" << s.baseline << "': " << s.reason << "\n";
        if (r.doubling) md << "- " << r.doubling->explanation << "\n";
        md << "\n";
    }

    if (r.conversions) {
        md << "## CO2 / water\n\n";
        if (r.conversions->co2_grams)
            md << "- CO2: " << r.conversions->co2_grams->str() << " g ("
               << r.conversions->co2_provenance << ")\n";
        if (r.conversions->water_liters)
            md << "- water: " << r.conversions->water_liters->str() << " L ("
               << r.conversions->water_provenance << ")\n";
        md << "\n";
    }

    if (r.budget_spec) {
        md << "## Budget\n\n";
        md << "Scope " << scope_name(r.budget_spec->scope) << ", mode "
           << mode_name(r.budget_spec->mode) << ".\n\n";
        if (r.overages.empty()) {
            md << "No overages.\n\n";
        } else {
            md << "| subject | metric | limit | observed | excess |\n|---|---|---|---|---|\n";
            for (const Overage& o : r.overages) {
                md << "| " << o.subject << " | " << metric_name(o.metric) << " | "
                   << o.limit.str() << " | " << o.observed.str() << " | " << o.excess.str()
                   << " |";
                md << "\n";
            }
            for (const Overage& o : r.overages) {
                if (o.first_exceeding_index)
                    md << "- " << o.subject << " crossed its " << metric_name(o.metric)
                       << " limit at event index " << *o.first_exceeding_index << "\n";
            }
            md << "\n";
        }
    }

    if (!r.warnings.empty()) {
        md << "## Warnings\n\n";
        for (const std::string& w : r.warnings) md << "- " << w << "\n";
        md << "\n";
    }
    return md.str();
}

std::string render_json(const AuditReport& r) {
    ordered_json j;
    j["schema_version"] = "1";

    ordered_json meta;
    meta["tool_version"] = r.metadata.tool_version;
    meta["config_digest"] = r.metadata.config_digest;
    meta["input_digests"] = ordered_json::object();
    for (const auto& [path, digest] : r.metadata.input_digests)
        meta["input_digests"][path] = digest;
    if (r.metadata.run_timestamp)
        meta["run_timestamp"] = format_timestamp(*r.metadata.run_timestamp);
    meta["session_label"] = r.metadata.session_label;
    j["metadata"] = std::move(meta);

    ordered_json parse;
    parse["totals"] = file_stats_json(r.parse_stats.totals);
    parse["per_file"] = ordered_json::object();
    for (const auto& [file, s] : r.parse_stats.per_file) parse["per_file"][file] = file_stats_json(s);
    j["parse_stats"] = std::move(parse);

    ordered_json cls;
    cls["events_by_kind"] = ordered_json::object();
    for (GenerationKind k : kKindOrder) {
        auto it = r.classify_stats.events_by_kind.find(k);
        if (it != r.classify_stats.events_by_kind.end())
            cls["events_by_kind"][std::string(kind_name(k))] = it->second;
    }
    cls["events_by_role"] = ordered_json::object();
    cls["images_by_role"] = ordered_json::object();
    for (ActorRole role : kRoleOrder) {
        auto it = r.classify_stats.events_by_role.find(role);
        if (it != r.classify_stats.events_by_role.end())
            cls["events_by_role"][std::string(role_name(role))] = it->second;
        auto im = r.classify_stats.images_by_role.find(role);
        if (im != r.classify_stats.images_by_role.end())
            cls["images_by_role"][std::string(role_name(role))] = im->second;
    }
    cls["total_events"] = r.classify_stats.total_events;
    cls["total_images"] = r.classify_stats.total_images;
    cls["unknown_role_events"] = r.classify_stats.unknown_role_events;
    cls["duplicates_collapsed"] = r.classify_stats.duplicates_collapsed;
    j["classify_stats"] = std::move(cls);

    ordered_json ledger;
    ledger["total_images"] = r.ledger.totals.total_images;
    ledger["total_kwh"] = r.ledger.totals.total_kwh.str();
    ledger["total_kwh_display"] = r.ledger.totals.total_kwh.fixed(2);
    ledger["per_role"] = ordered_json::object();
    for (ActorRole role : kRoleOrder) {
        auto it = r.ledger.totals.per_role.find(role);
        if (it == r.ledger.totals.per_role.end()) continue;
        ordered_json rj;
        rj["images"] = it->second.images;
        rj["kwh"] = it->second.kwh.str();
        rj["kwh_display"] = it->second.kwh.fixed(2);
        ledger["per_role"][std::string(role_name(role))] = std::move(rj);
    }
    ledger["provenance"] = r.ledger.totals.provenance;
    ledger["missing_factors"] = ordered_json::array();
    for (const MissingFactorNote& m : r.ledger.totals.missing_factors) {
        ordered_json mj;
        mj["platform"] = m.platform;
        mj["kind"] = m.kind;
        mj["images"] = m.images;
        ledger["missing_factors"].push_back(std::move(mj));
    }
    j["ledger"] = std::move(ledger);

    ordered_json rates;
    rates["conversion_rates"] = ordered_json::object();
    for (ActorRole role : kRoleOrder) {
        auto it = r.ledger.rates.conversion_rates.find(role);
        if (it == r.ledger.rates.conversion_rates.end()) continue;
        ordered_json cj;
        cj["exact"] = it->second.str();
        cj["percent_display"] = percent_display(it->second);
        rates["conversion_rates"][std::string(role_name(role))] = std::move(cj);
    }
    if (r.ledger.rates.avg_kwh_per_student)
        rates["avg_kwh_per_student"] = r.ledger.rates.avg_kwh_per_student->str();
    if (r.ledger.rates.kwh_per_student_hour)
        rates["kwh_per_student_hour"] = r.ledger.rates.kwh_per_student_hour->str();
    rates["warnings"] = ordered_json::array();
    for (const RateWarning& w : r.ledger.rates.warnings) {
        ordered_json wj;
        wj["role"] = std::string(role_name(w.role));
        wj["message"] = w.message;
        rates["warnings"].push_back(std::move(wj));
    }
    j["rates"] = std::move(rates);

    if (r.session) {
        ordered_json sj;
        sj["duration_hours"] = r.session->duration_hours.str();
        sj["n_students"] = r.session->n_students;
        sj["label"] = r.session->label;
        j["session"] = std::move(sj);
    }

    ordered_json cmp;
    cmp["results"] = ordered_json::array();
    for (const Comparison& c : r.comparisons.comparisons) {
        ordered_json cj;
        cj["baseline"] = c.baseline;
        cj["ratio"] = c.ratio.str();
        cj["ratio_display"] = c.ratio.fixed(2);
        cj["statement"] = c.statement;
        cmp["results"].push_back(std::move(cj));
    }
    cmp["skipped"] = ordered_json::array();
    for (const SkippedBaseline& s : r.comparisons.skipped) {
        ordered_json sj;
        sj["baseline"] = s.baseline;
        sj["reason"] = s.reason;
        cmp["skipped"].push_back(std::move(sj));
    }
    j["comparisons"] = std::move(cmp);

    if (r.doubling) {
        ordered_json dj;
        dj["doubles"] = r.doubling->doubles;
        dj["combined_kwh_per_hour"] = r.doubling->combined.str();
        dj["ratio"] = r.doubling->ratio.str();
        dj["explanation"] = r.doubling->explanation;
        j["doubling"] = std::move(dj);
    }

    if (r.conversions) {
        ordered_json vj;
        if (r.conversions->co2_grams) {
            vj["co2_grams"] = r.conversions->co2_grams->str();
            vj["co2_provenance"] = r.conversions->co2_provenance;
        }
        if (r.conversions->water_liters) {
            vj["water_liters"] = r.conversions->water_liters->str();
            vj["water_provenance"] = r.conversions->water_provenance;
        }
        j["conversions"] = std::move(vj);
    }

    if (r.budget_spec) {
        ordered_json bj;
        bj["scope"] = std::string(scope_name(r.budget_spec->scope));
        bj["mode"] = std::string(mode_name(r.budget_spec->mode));
        if (r.budget_spec->max_trials) bj["max_trials"] = *r.budget_spec->max_trials;
        if (r.budget_spec->max_kwh) bj["max_kwh"] = r.budget_spec->max_kwh->str();
        bj["count_failed"] = r.budget_spec->count_failed;
        bj["overages"] = ordered_json::array();
        for (const Overage& o : r.overages) {
            ordered_json oj;
            oj["subject"] = o.subject;
            oj["metric"] = std::string(metric_name(o.metric));
            oj["limit"] = o.limit.str();
            oj["observed"] = o.observed.str();
            oj["excess"] = o.excess.str();
            if (o.first_exceeding_index)
                oj["first_exceeding_index"] = *o.first_exceeding_index;
            bj["overages"].push_back(std::move(oj));
        }
        j["budget"] = std::move(bj);
    }

    j["warnings"] = r.warnings;
    return j.dump(2) + "\n";
}

std::string emit_plot_data(const AuditReport& r) {
    std::ostringstream csv;
    csv << "subject,metric,value,unit\n";
    for (ActorRole role : kRoleOrder) {
        auto it = r.ledger.totals.per_role.find(role);
        if (it == r.ledger.totals.per_role.end()) continue;
        csv << role_name(role) << ",images," << it->second.images << ",count\n";
        csv << role_name(role) << ",energy," << it->second.kwh.str() << ",kWh\n";
    }
    for (const Comparison& c : r.comparisons.comparisons)
        csv << c.baseline << ",ratio," << c.ratio.str() << ",x\n";
    return csv.str();
}

AuditReport parse_report_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw AuditError(AuditError::Kind::SchemaMismatch,
                         std::string("report JSON malformed: ") + e.what());
    }
    if (j.value("schema_version", "") != "1")
        throw AuditError(AuditError::Kind::SchemaMismatch, "unsupported report schema version");

    AuditReport r;
    const auto& meta = j["metadata"];
    r.metadata.tool_version = meta.value("tool_version", "");
    r.metadata.config_digest = meta.value("config_digest", "");
    for (const auto& [path, digest] : meta["input_digests"].items())
        r.metadata.input_digests[path] = digest.get<std::string>();
    if (meta.contains("run_timestamp"))
        r.metadata.run_timestamp = parse_timestamp(meta["run_timestamp"].get<std::string>());
    r.metadata.session_label = meta.value("session_label", "");

    r.parse_stats.totals = file_stats_from_json(j["parse_stats"]["totals"]);
    for (const auto& [file, s] : j["parse_stats"]["per_file"].items())
        r.parse_stats.per_file[file] = file_stats_from_json(s);

    const auto& cls = j["classify_stats"];
    for (const auto& [k, v] : cls["events_by_kind"].items()) {
        for (GenerationKind kind : kKindOrder)
            if (kind_name(kind) == k) r.classify_stats.events_by_kind[kind] = v.get<std::int64_t>();
    }
    for (const auto& [k, v] : cls["events_by_role"].items()) {
        if (auto role = parse_role(k)) r.classify_stats.events_by_role[*role] = v.get<std::int64_t>();
    }
    for (const auto& [k, v] : cls["images_by_role"].items()) {
        if (auto role = parse_role(k)) r.classify_stats.images_by_role[*role] = v.get<std::int64_t>();
    }
    r.classify_stats.total_events = cls.value("total_events", 0);
    r.classify_stats.total_images = cls.value("total_images", 0);
    r.classify_stats.unknown_role_events = cls.value("unknown_role_events", 0);
    r.classify_stats.duplicates_collapsed = cls.value("duplicates_collapsed", 0);

    const auto& ledger = j["ledger"];
    r.ledger.totals.total_images = ledger.value("total_images", 0);
    r.ledger.totals.total_kwh = Decimal::parse(ledger["total_kwh"].get<std::string>());
    for (const auto& [k, v] : ledger["per_role"].items()) {
        if (auto role = parse_role(k)) {
            RoleTotals rt;
            rt.images = v.value("images", 0);
            rt.kwh = Decimal::parse(v["kwh"].get<std::string>());
            r.ledger.totals.per_role[*role] = rt;
        }
    }
    for (const auto& p : ledger["provenance"])
        r.ledger.totals.provenance.push_back(p.get<std::string>());
    for (const auto& m : ledger["missing_factors"])
        r.ledger.totals.missing_factors.push_back(
            {m["platform"].get<std::string>(), m["kind"].get<std::string>(),
             m["images"].get<std::int64_t>()});

    const auto& rates = j["rates"];
    for (const auto& [k, v] : rates["conversion_rates"].items()) {
        if (auto role = parse_role(k))
            r.ledger.rates.conversion_rates[*role] = Decimal::parse(v["exact"].get<std::string>());
    }
    if (rates.contains("avg_kwh_per_student"))
        r.ledger.rates.avg_kwh_per_student =
            Decimal::parse(rates["avg_kwh_per_student"].get<std::string>());
    if (rates.contains("kwh_per_student_hour"))
        r.ledger.rates.kwh_per_student_hour =
            Decimal::parse(rates["kwh_per_student_hour"].get<std::string>());
    for (const auto& w : rates["warnings"]) {
        RateWarning rw;
        if (auto role = parse_role(w["role"].get<std::string>())) rw.role = *role;
        rw.message = w["message"].get<std::string>();
        r.ledger.rates.warnings.push_back(std::move(rw));
    }

    if (j.contains("session")) {
        SessionInfo s;
        s.duration_hours = Decimal::parse(j["session"]["duration_hours"].get<std::string>());
        s.n_students = j["session"].value("n_students", std::int64_t{0});
        s.label = j["session"].value("label", "");
        r.session = s;
    }

    for (const auto& c : j["comparisons"]["results"]) {
        Comparison cmp;
        cmp.baseline = c["baseline"].get<std::string>();
        cmp.ratio = Decimal::parse(c["ratio"].get<std::string>());
        cmp.statement = c["statement"].get<std::string>();
        r.comparisons.comparisons.push_back(std::move(cmp));
    }
    for (const auto& s : j["comparisons"]["skipped"])
        r.comparisons.skipped.push_back(
            {s["baseline"].get<std::string>(), s["reason"].get<std::string>()});

    if (j.contains("doubling")) {
        DoublingResult d;
        d.doubles = j["doubling"]["doubles"].get<bool>();
        d.combined = Decimal::parse(j["doubling"]["combined_kwh_per_hour"].get<std::string>());
        d.ratio = Decimal::parse(j["doubling"]["ratio"].get<std::string>());
        d.explanation = j["doubling"]["explanation"].get<std::string>();
        r.doubling = d;
    }

    if (j.contains("conversions")) {
        ConversionOutcome c;
        if (j["conversions"].contains("co2_grams")) {
            c.co2_grams = Decimal::parse(j["conversions"]["co2_grams"].get<std::string>());
            c.co2_provenance = j["conversions"].value("co2_provenance", "");
        }
        if (j["conversions"].contains("water_liters")) {
            c.water_liters = Decimal::parse(j["conversions"]["water_liters"].get<std::string>());
            c.water_provenance = j["conversions"].value("water_provenance", "");
        }
        r.conversions = c;
    }

    if (j.contains("budget")) {
        const auto& b = j["budget"];
        BudgetSpec spec;
        std::string scope = b.value("scope", "global");
        spec.scope = scope == "per_role"     ? BudgetScope::PerRole
                     : scope == "per_author" ? BudgetScope::PerAuthor
                                             : BudgetScope::Global;
        spec.mode = b.value("mode", "report") == "enforce" ? BudgetMode::Enforce
                                                           : BudgetMode::Report;
        if (b.contains("max_trials")) spec.max_trials = b["max_trials"].get<std::int64_t>();
        if (b.contains("max_kwh")) spec.max_kwh = Decimal::parse(b["max_kwh"].get<std::string>());
        spec.count_failed = b.value("count_failed", false);
        r.budget_spec = spec;
        for (const auto& o : b["overages"]) {
            Overage ov;
            ov.subject = o["subject"].get<std::string>();
            ov.metric = o["metric"].get<std::string>() == "energy" ? BudgetMetric::Energy
                                                                   : BudgetMetric::Trials;
            ov.limit = Decimal::parse(o["limit"].get<std::string>());
            ov.observed = Decimal::parse(o["observed"].get<std::string>());
            ov.excess = Decimal::parse(o["excess"].get<std::string>());
            if (o.contains("first_exceeding_index"))
                ov.first_exceeding_index = o["first_exceeding_index"].get<std::size_t>();
            r.overages.push_back(std::move(ov));
        }
    }

    for (const auto& w : j["warnings"]) r.warnings.push_back(w.get<std::string>());
    return r;
}

}  // namespace footprint
