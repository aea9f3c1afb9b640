#pragma once

// Single-file JSON run configuration: one archivable, diffable artifact
// per audit. The config digest baked into every report ties published
// numbers back to the exact run parameters.

#include <optional>
#include <string>
#include <vector>

#include "footprint/budget.hpp"
#include "footprint/classify.hpp"
#include "footprint/context.hpp"
#include "footprint/ingest.hpp"
#include "footprint/ledger.hpp"

namespace footprint {

enum class InputFormat { DiscordCsv, ChatGPTExport, GenericEvents };

std::string_view input_format_name(InputFormat f);

struct InputSpec {
    std::string path;  // resolved relative to the config file
    InputFormat format = InputFormat::GenericEvents;
};

struct RunConfig {
    std::vector<InputSpec> inputs;
    ActorMap actors;
    RuleSet rules = RuleSet::midjourney_defaults();
    EnergyFactorTable factors = EnergyFactorTable::defaults();
    std::optional<SessionInfo> session;
    UsageManifest manifest;
    BaselineSet baselines = BaselineSet::builtins();
    ConversionFactors conversions;
    std::optional<BudgetSpec> budget;
    CsvOptions csv;
    bool strict = false;
    bool dedupe = false;

    // Unknown-key notices collected under lenient loading.
    std::vector<std::string> warnings;
    // SHA-256 of the canonicalized (key-sorted, whitespace-free) config.
    std::string digest;
};

// Loads and validates a config file. Unknown keys are errors when the
// file's own "strict" flag (or strict_override) is set, warnings
// otherwise. Referenced input paths must exist.
RunConfig load_config(const std::string& path, std::optional<bool> strict_override = {});

// Parses a factor-table JSON document (the "factors" config section as a
// standalone file). Used by the factors --validate subcommand.
EnergyFactorTable parse_factor_table(const std::string& json_text);

}  // namespace footprint
