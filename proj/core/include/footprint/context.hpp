#pragma once

// Contextualizes ledger figures against everyday-practice baselines
// (laptop use, image rendering, a two-person apartment's day) and applies
// optional user-supplied CO2 / water conversion factors.

#include <optional>
#include <string>
#include <vector>

#include "footprint/decimal.hpp"

namespace footprint {

enum class BaselinePeriod { Hour, Day, Year, Unit };

std::string_view period_name(BaselinePeriod p);
std::optional<BaselinePeriod> parse_period(std::string_view name);

struct Baseline {
    std::string name;
    Decimal kwh;  // per one `per` unit
    BaselinePeriod per = BaselinePeriod::Unit;
    std::string source_note;
    // Optional uncertainty band on kwh, e.g. the apartment-day 5.48-7.40
    // range behind the 6.0 point value.
    std::optional<std::pair<Decimal, Decimal>> range;
};

// Built-ins plus user additions. A user baseline may not silently shadow a
// built-in: name collisions throw.
class BaselineSet {
public:
    static BaselineSet builtins();

    void add(Baseline baseline);
    const std::vector<Baseline>& all() const { return baselines_; }

private:
    std::vector<Baseline> baselines_;
};

struct ConversionFactor {
    Decimal value;
    std::string provenance;
};

struct ConversionFactors {
    std::optional<ConversionFactor> grid_carbon_intensity;   // gCO2 per kWh
    std::optional<ConversionFactor> water_use_effectiveness; // liters per kWh
};

struct Comparison {
    std::string baseline;
    Decimal ratio;
    std::string statement;
};

struct SkippedBaseline {
    std::string baseline;
    std::string reason;
};

struct CompareOutcome {
    std::vector<Comparison> comparisons;
    std::vector<SkippedBaseline> skipped;
};

// Ratios of subject_kwh against each applicable baseline, normalized over
// `span_hours`. Per-time baselines without a span are skipped with a
// reason; if nothing applies the outcome carries only skips.
CompareOutcome compare(Decimal subject_kwh, std::optional<Decimal> span_hours,
                       const BaselineSet& baselines, const std::string& subject_label);

struct DoublingResult {
    bool doubles = false;
    Decimal combined;
    Decimal ratio;  // (laptop + workshop) / laptop
    std::string explanation;
};

// Checks the additivity claim: genAI use on top of laptop use roughly
// doubles the hourly draw. True iff combined/laptop >= 2 - epsilon with
// epsilon = 0.1 (tool constant; the underlying claim is qualitative).
DoublingResult doubling_check(Decimal workshop_kwh_per_student_hour,
                              Decimal laptop_kwh_per_hour);

struct ConversionOutcome {
    std::optional<Decimal> co2_grams;
    std::optional<Decimal> water_liters;
    std::string co2_provenance;
    std::string water_provenance;
};

// kWh -> grams CO2 / liters of water using the configured factors only.
// Throws AuditError{NoFactorsConfigured} when neither factor is present.
ConversionOutcome convert(Decimal total_kwh, const ConversionFactors& factors);

}  // namespace footprint
