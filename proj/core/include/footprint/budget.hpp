#pragma once

// Trial-count and energy budgets per actor, reported or enforced over a
// classified log. "Keeping score" support for moderation-minded runs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "footprint/ledger.hpp"

namespace footprint {

enum class BudgetScope { Global, PerRole, PerAuthor };
enum class BudgetMode { Report, Enforce };
enum class BudgetMetric { Trials, Energy };

std::string_view scope_name(BudgetScope s);
std::string_view mode_name(BudgetMode m);
std::string_view metric_name(BudgetMetric m);

struct BudgetSpec {
    BudgetScope scope = BudgetScope::Global;
    // A trial is an event with image_count > 0; count_failed widens that to
    // every event, pricing failed prompts as attention cost.
    std::optional<std::int64_t> max_trials;
    std::optional<Decimal> max_kwh;
    BudgetMode mode = BudgetMode::Report;
    bool count_failed = false;
};

struct Overage {
    std::string subject;  // "global", a role name, or an author id
    BudgetMetric metric = BudgetMetric::Trials;
    Decimal limit;
    Decimal observed;
    Decimal excess;  // observed - limit, always > 0
    // Enforce mode: index (into the timestamp-ordered event sequence) of
    // the event whose inclusion first pushed the subject past the limit.
    std::optional<std::size_t> first_exceeding_index;
};

// Checks every subject in scope against the configured limits. Enforce
// mode orders events by timestamp (input order breaks ties) and requires
// every event to carry one, else AuditError{NoTimestamps}.
std::vector<Overage> check_budget(const std::vector<GenerationEvent>& events,
                                  const EnergyFactorTable& factors, const BudgetSpec& spec);

}  // namespace footprint
