#pragma once

// Sequential composition of the audit stages: ingest -> classify -> ledger
// -> context -> budget -> report. The CLI is a thin wrapper over these.

#include <optional>
#include <string>
#include <vector>

#include "footprint/config.hpp"
#include "footprint/report.hpp"

namespace footprint {

// Exit-code precedence: hard error (3) > budget overage in enforce mode
// (2) > warnings (1) > clean (0).
enum class ExitCode : int { Clean = 0, Warnings = 1, Overage = 2, Error = 3 };

struct AuditOutcome {
    ExitCode exit_code = ExitCode::Clean;
    AuditReport report;
    // Set instead of a populated report when exit_code is Error.
    std::string error;
};

// Runs the full pipeline over the configured inputs. Never throws; hard
// errors come back as ExitCode::Error with a message. The run timestamp in
// the report honors SOURCE_DATE_EPOCH so archived runs reproduce
// byte-for-byte.
AuditOutcome run_audit(const RunConfig& config);

// Ingest + classify only; the ledger and everything after are skipped.
AuditOutcome run_classify(const RunConfig& config);

struct RenderedArtifacts {
    std::optional<std::string> markdown;
    std::optional<std::string> json;
    std::optional<std::string> csv;
};

// formats: subset of {"md", "json", "csv"}.
RenderedArtifacts render_artifacts(const AuditReport& report,
                                   const std::vector<std::string>& formats);

}  // namespace footprint
