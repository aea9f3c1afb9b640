#include "footprint/pipeline.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>

#include "footprint/digest.hpp"
#include "footprint/errors.hpp"
#include "footprint/version.hpp"

namespace footprint {
namespace {

std::optional<Timestamp> run_timestamp() {
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) {
        return Timestamp{std::atoll(sde), false};
    }
    return Timestamp{static_cast<std::int64_t>(std::time(nullptr)), false};
}

ParseResult parse_input(const InputSpec& input, const RunConfig& config) {
    std::ifstream in(input.path, std::ios::binary);
    if (!in) throw AuditError(AuditError::Kind::IoError, "cannot open input '" + input.path + "'");
    switch (input.format) {
        case InputFormat::DiscordCsv: {
            CsvOptions opts = config.csv;
            opts.strict = config.strict;
            return parse_discord_csv(in, opts, input.path);
        }
        case InputFormat::ChatGPTExport:
            return parse_chatgpt_export(in, input.path);
        case InputFormat::GenericEvents:
            return parse_generic_events(in, config.strict, input.path);
    }
    throw AuditError(AuditError::Kind::ConfigError, "unhandled input format");
}

// Stages shared by audit and classify-only runs: metadata, ingest,
// classification.
void run_front_half(const RunConfig& config, AuditReport& report,
                    std::vector<GenerationEvent>& events) {
    report.metadata.tool_version = kToolVersion;
    report.metadata.config_digest = config.digest;
    report.metadata.run_timestamp = run_timestamp();
    if (config.session) report.metadata.session_label = config.session->label;
    report.warnings = config.warnings;

    std::vector<RawEvent> raw;
    for (const InputSpec& input : config.inputs) {
        report.metadata.input_digests[input.path] = sha256_file_hex(input.path);
        ParseResult parsed = parse_input(input, config);
        for (const auto& [file, stats] : parsed.stats.per_file) {
            report.parse_stats.add_file(file, stats);
            if (stats.rows_malformed > 0)
                report.warnings.push_back(file + ": " + std::to_string(stats.rows_malformed) +
                                          " malformed row(s) skipped");
        }
        raw.insert(raw.end(), std::make_move_iterator(parsed.events.begin()),
                   std::make_move_iterator(parsed.events.end()));
    }

    ClassifyResult classified = classify_all(raw, config.rules, config.actors, config.dedupe);
    report.classify_stats = classified.stats;
    if (classified.stats.unknown_role_events > 0)
        report.warnings.push_back(std::to_string(classified.stats.unknown_role_events) +
                                  " event(s) could not be attributed to a role");
    events = std::move(classified.events);
}

ExitCode settle_exit_code(const AuditReport& report) {
    bool enforced_overage = report.budget_spec &&
                            report.budget_spec->mode == BudgetMode::Enforce &&
                            !report.overages.empty();
    if (enforced_overage) return ExitCode::Overage;
    if (!report.warnings.empty()) return ExitCode::Warnings;
    return ExitCode::Clean;
}

}  // namespace

AuditOutcome run_audit(const RunConfig& config) {
    AuditOutcome outcome;
    try {
        std::vector<GenerationEvent> events;
        run_front_half(config, outcome.report, events);
        AuditReport& report = outcome.report;

        report.ledger.totals = energy_of(events, config.factors, /*lenient=*/!config.strict);
        for (const MissingFactorNote& m : report.ledger.totals.missing_factors)
            report.warnings.push_back("no energy factor for (" + m.platform + ", " + m.kind +
                                      "); " + std::to_string(m.images) +
                                      " image(s) contributed 0 kWh");

        if (config.session) {
            report.session = config.session;
            report.ledger.rates =
                derived_rates(report.ledger.totals, *config.session, config.manifest);
            for (const RateWarning& w : report.ledger.rates.warnings)
                report.warnings.push_back(std::string(role_name(w.role)) + ": " + w.message);
        }

        // Per-hour baselines contextualize the per-student-hour figure over
        // one hour; day/year/unit baselines contextualize the total over
        // one day. The built-in workshop-hour baseline is the subject
        // itself, so it is skipped rather than compared.
        Decimal day_span = Decimal::from_int(24);
        Decimal hour_span = Decimal::from_int(1);
        for (const Baseline& b : config.baselines.all()) {
            BaselineSet one;
            one.add(b);
            if (b.per == BaselinePeriod::Hour) {
                if (b.name == "genai-workshop-student-hour") {
                    report.comparisons.skipped.push_back(
                        {b.name, "this baseline is derived from the audited subject"});
                    continue;
                }
                if (!report.ledger.rates.kwh_per_student_hour) {
                    report.comparisons.skipped.push_back(
                        {b.name, "no per-student-hour figure (session info absent)"});
                    continue;
                }
                CompareOutcome c = compare(*report.ledger.rates.kwh_per_student_hour, hour_span,
                                           one, "per-student-hour energy");
                report.comparisons.comparisons.insert(report.comparisons.comparisons.end(),
                                                      c.comparisons.begin(), c.comparisons.end());
            } else {
                CompareOutcome c =
                    compare(report.ledger.totals.total_kwh, day_span, one, "total energy");
                report.comparisons.comparisons.insert(report.comparisons.comparisons.end(),
                                                      c.comparisons.begin(), c.comparisons.end());
                report.comparisons.skipped.insert(report.comparisons.skipped.end(),
                                                  c.skipped.begin(), c.skipped.end());
            }
        }

        if (report.ledger.rates.kwh_per_student_hour) {
            for (const Baseline& b : config.baselines.all()) {
                if (b.name == "laptop-hour") {
                    report.doubling =
                        doubling_check(*report.ledger.rates.kwh_per_student_hour, b.kwh);
                    break;
                }
            }
        }

        if (config.conversions.grid_carbon_intensity ||
            config.conversions.water_use_effectiveness)
            report.conversions = convert(report.ledger.totals.total_kwh, config.conversions);

        if (config.budget) {
            report.budget_spec = config.budget;
            report.overages = check_budget(events, config.factors, *config.budget);
        }

        outcome.exit_code = settle_exit_code(report);
    } catch (const AuditError& e) {
        outcome.exit_code = ExitCode::Error;
        outcome.error = e.what();
    } catch (const DecimalError& e) {
        outcome.exit_code = ExitCode::Error;
        outcome.error = e.what();
    }
    return outcome;
}

AuditOutcome run_classify(const RunConfig& config) {
    AuditOutcome outcome;
    try {
        std::vector<GenerationEvent> events;
        run_front_half(config, outcome.report, events);
        outcome.exit_code =
            outcome.report.warnings.empty() ? ExitCode::Clean : ExitCode::Warnings;
    } catch (const AuditError& e) {
        outcome.exit_code = ExitCode::Error;
        outcome.error = e.what();
    }
    return outcome;
}

RenderedArtifacts render_artifacts(const AuditReport& report,
                                   const std::vector<std::string>& formats) {
    RenderedArtifacts out;
    for (const std::string& f : formats) {
        if (f == "md") out.markdown = render_markdown(report);
        else if (f == "json") out.json = render_json(report);
        else if (f == "csv") out.csv = emit_plot_data(report);
        else
            throw AuditError(AuditError::Kind::ConfigError,
                             "unknown output format '" + f + "' (expected md, json, csv)");
    }
    return out;
}

}  // namespace footprint
