#pragma once

// Deterministic renderers for the full audit: Markdown for people, JSON
// (exact decimals as strings, schema_version "1") for machines, and a tidy
// CSV for external plotting.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "footprint/budget.hpp"
#include "footprint/classify.hpp"
#include "footprint/context.hpp"
#include "footprint/event.hpp"
#include "footprint/ledger.hpp"

namespace footprint {

struct ReportMetadata {
    std::string tool_version;
    std::string config_digest;
    std::map<std::string, std::string> input_digests;  // path -> sha256
    // Honors SOURCE_DATE_EPOCH so archived runs reproduce byte-for-byte.
    std::optional<Timestamp> run_timestamp;
    std::string session_label;
};

struct AuditReport {
    ReportMetadata metadata;
    ParseStats parse_stats;
    ClassifyStats classify_stats;
    LedgerReport ledger;
    std::optional<SessionInfo> session;
    CompareOutcome comparisons;
    std::optional<DoublingResult> doubling;
    std::optional<ConversionOutcome> conversions;
    std::vector<Overage> overages;
    std::optional<BudgetSpec> budget_spec;
    std::vector<std::string> warnings;
};

std::string render_markdown(const AuditReport& report);
std::string render_json(const AuditReport& report);

// Tidy rows: per-role ledger figures plus one row per comparison.
// Header: subject,metric,value,unit
std::string emit_plot_data(const AuditReport& report);

// Inverse of render_json for the structured figures; used by tooling and
// round-trip tests.
AuditReport parse_report_json(const std::string& text);

}  // namespace footprint
