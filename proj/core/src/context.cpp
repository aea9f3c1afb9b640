#include "footprint/context.hpp"

#include "footprint/errors.hpp"

namespace footprint {

std::string_view period_name(BaselinePeriod p) {
    switch (p) {
        case BaselinePeriod::Hour: return "hour";
        case BaselinePeriod::Day: return "day";
        case BaselinePeriod::Year: return "year";
        case BaselinePeriod::Unit: return "unit";
    }
    return "unit";
}

std::optional<BaselinePeriod> parse_period(std::string_view name) {
    if (name == "hour") return BaselinePeriod::Hour;
    if (name == "day") return BaselinePeriod::Day;
    if (name == "year") return BaselinePeriod::Year;
    if (name == "unit") return BaselinePeriod::Unit;
    return std::nullopt;
}

BaselineSet BaselineSet::builtins() {
    BaselineSet set;
    set.add({"genai-workshop-student-hour", Decimal::parse("0.05"), BaselinePeriod::Hour,
             "average genAI workshop energy per student-hour (0.6 kWh over 12 h)", std::nullopt});
    set.add({"render-hour", Decimal::parse("0.07"), BaselinePeriod::Hour,
             "mid-range image rendering for 1 hour (Iatan 2017)", std::nullopt});
    set.add({"laptop-hour", Decimal::parse("0.054"), BaselinePeriod::Hour,
             "2019 MacBook Pro hourly draw (Osthoff & Deakin 2021)", std::nullopt});
    set.add({"apartment-day", Decimal::parse("6.0"), BaselinePeriod::Day,
             "two-person apartment, 2190 kWh/yr over 365 days (SvizzeraEnergia 2021; "
             "IRSAP 2023 gives 2000-2700 kWh/yr)",
             std::pair{Decimal::parse("5.48"), Decimal::parse("7.40")}});
    return set;
}

void BaselineSet::add(Baseline baseline) {
    for (const Baseline& b : baselines_) {
        if (b.name == baseline.name)
            throw AuditError(AuditError::Kind::BaselineNameCollision,
                             "baseline '" + baseline.name + "' already exists; pick a new name");
    }
    if (!baseline.kwh.is_negative() && !baseline.kwh.is_zero()) {
        baselines_.push_back(std::move(baseline));
        return;
    }
    throw AuditError(AuditError::Kind::ConfigError,
                     "baseline '" + baseline.name + "' must have kwh > 0");
}

CompareOutcome compare(Decimal subject_kwh, std::optional<Decimal> span_hours,
                       const BaselineSet& baselines, const std::string& subject_label) {
    CompareOutcome outcome;
    const Decimal five = Decimal::from_int(5);
    const Decimal one = Decimal::from_int(1);

    for (const Baseline& b : baselines.all()) {
        Decimal base = b.kwh;
        if (b.per != BaselinePeriod::Unit) {
            if (!span_hours) {
                outcome.skipped.push_back(
                    {b.name, "per-" + std::string(period_name(b.per)) +
                                 " baseline needs a time span to normalize against"});
                continue;
            }
            Decimal span = *span_hours;
            switch (b.per) {
                case BaselinePeriod::Hour: break;
                case BaselinePeriod::Day: span = span.div(Decimal::from_int(24)); break;
                case BaselinePeriod::Year: span = span.div(Decimal::from_int(8760)); break;
                case BaselinePeriod::Unit: break;
            }
            base = b.kwh.mul(span);
        }
        if (base.is_zero()) {
            outcome.skipped.push_back({b.name, "normalized baseline magnitude is zero"});
            continue;
        }

        Comparison cmp;
        cmp.baseline = b.name;
        cmp.ratio = subject_kwh.div(base);
        cmp.statement = subject_label + " is " + cmp.ratio.rounded(2).str() + "x '" + b.name + "'";
        if (cmp.ratio == one && b.per != BaselinePeriod::Unit)
            cmp.statement += " — equal to one " + std::string(period_name(b.per));
        else if (cmp.ratio > five)
            cmp.statement += " — more than five times the baseline";
        outcome.comparisons.push_back(std::move(cmp));
    }
    return outcome;
}

DoublingResult doubling_check(Decimal workshop_kwh_per_student_hour,
                              Decimal laptop_kwh_per_hour) {
    // epsilon below 2x that still counts as "doubles"
    static const Decimal kEpsilon = Decimal::parse("0.1");

    DoublingResult r;
    r.combined = laptop_kwh_per_hour + workshop_kwh_per_student_hour;
    r.ratio = r.combined.div(laptop_kwh_per_hour);
    r.doubles = r.ratio >= Decimal::from_int(2) - kEpsilon;
    r.explanation = "laptop " + laptop_kwh_per_hour.str() + " kWh/h + workshop " +
                    workshop_kwh_per_student_hour.str() + " kWh/h = " + r.combined.str() +
                    " kWh/h, " + r.ratio.rounded(2).str() + "x laptop use alone" +
                    (r.doubles ? " (doubles it)" : " (does not double it)");
    return r;
}

ConversionOutcome convert(Decimal total_kwh, const ConversionFactors& factors) {
    if (!factors.grid_carbon_intensity && !factors.water_use_effectiveness)
        throw AuditError(AuditError::Kind::NoFactorsConfigured,
                         "no CO2 or water conversion factors configured");

    ConversionOutcome out;
    if (factors.grid_carbon_intensity) {
        out.co2_grams = total_kwh.mul(factors.grid_carbon_intensity->value);
        out.co2_provenance = factors.grid_carbon_intensity->provenance;
    }
    if (factors.water_use_effectiveness) {
        out.water_liters = total_kwh.mul(factors.water_use_effectiveness->value);
        out.water_provenance = factors.water_use_effectiveness->provenance;
    }
    return out;
}

}  // namespace footprint
