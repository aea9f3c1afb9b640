#include "footprint/budget.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "footprint/errors.hpp"

namespace footprint {
namespace {

std::string subject_of(const GenerationEvent& ev, BudgetScope scope) {
    switch (scope) {
        case BudgetScope::Global: return "global";
        case BudgetScope::PerRole: return std::string(role_name(ev.role));
        case BudgetScope::PerAuthor: return ev.author_id;
    }
    return "global";
}

}  // namespace

std::string_view scope_name(BudgetScope s) {
    switch (s) {
        case BudgetScope::Global: return "global";
        case BudgetScope::PerRole: return "per_role";
        case BudgetScope::PerAuthor: return "per_author";
    }
    return "global";
}

std::string_view mode_name(BudgetMode m) {
    return m == BudgetMode::Report ? "report" : "enforce";
}

std::string_view metric_name(BudgetMetric m) {
    return m == BudgetMetric::Trials ? "trials" : "energy";
}

std::vector<Overage> check_budget(const std::vector<GenerationEvent>& events,
                                  const EnergyFactorTable& factors, const BudgetSpec& spec) {
    if (!spec.max_trials && !spec.max_kwh)
        throw AuditError(AuditError::Kind::ConfigError,
                         "budget spec needs max_trials or max_kwh");

    // Processing order: timestamp order in Enforce mode (ties keep input
    // order), input order otherwise. Totals are order-independent; only the
    // crossing index depends on it.
    std::vector<std::size_t> order(events.size());
    std::iota(order.begin(), order.end(), 0);
    if (spec.mode == BudgetMode::Enforce) {
        for (const GenerationEvent& ev : events) {
            if (!ev.timestamp)
                throw AuditError(AuditError::Kind::NoTimestamps,
                                 "enforce-mode budgets need a timestamp on every event");
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return *events[a].timestamp < *events[b].timestamp;
        });
    }

    struct Running {
        std::int64_t trials = 0;
        Decimal kwh;
        std::optional<std::size_t> trials_crossed;
        std::optional<std::size_t> kwh_crossed;
    };
    std::map<std::string, Running> running;

    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const GenerationEvent& ev = events[order[pos]];
        Running& r = running[subject_of(ev, spec.scope)];

        bool is_trial = ev.image_count > 0 || spec.count_failed;
        if (is_trial) r.trials += 1;
        if (ev.image_count > 0) {
            auto factor = factors.lookup(ev.platform_label, std::string(kind_name(ev.kind)),
                                         ev.media);
            if (!factor)
                throw AuditError(AuditError::Kind::MissingFactor,
                                 "no energy factor for (" + ev.platform_label + ", " +
                                     std::string(kind_name(ev.kind)) + ") while budgeting");
            r.kwh += factor->kwh_per_image.times(ev.image_count);
        }

        if (spec.max_trials && r.trials > *spec.max_trials && !r.trials_crossed)
            r.trials_crossed = pos;
        if (spec.max_kwh && r.kwh > *spec.max_kwh && !r.kwh_crossed) r.kwh_crossed = pos;
    }

    std::vector<Overage> overages;
    for (const auto& [subject, r] : running) {
        if (spec.max_trials && r.trials > *spec.max_trials) {
            Decimal limit = Decimal::from_int(*spec.max_trials);
            Decimal observed = Decimal::from_int(r.trials);
            overages.push_back({subject, BudgetMetric::Trials, limit, observed, observed - limit,
                                spec.mode == BudgetMode::Enforce ? r.trials_crossed
                                                                 : std::nullopt});
        }
        if (spec.max_kwh && r.kwh > *spec.max_kwh) {
            overages.push_back({subject, BudgetMetric::Energy, *spec.max_kwh, r.kwh,
                                r.kwh - *spec.max_kwh,
                                spec.mode == BudgetMode::Enforce ? r.kwh_crossed : std::nullopt});
        }
    }
    return overages;
}

}  // namespace footprint
