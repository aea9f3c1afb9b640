#pragma once

// The arithmetic core: image counts x per-image energy factors, plus the
// derived rates (conversion, per-student average, per student-hour). All
// figures are exact decimals; display rounding happens in the report layer.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "footprint/classify.hpp"
#include "footprint/decimal.hpp"

namespace footprint {

struct FactorEntry {
    Decimal kwh_per_image;
    std::string provenance;
};

// (platform, kind) -> kWh per image. "*" is the wildcard on either axis.
// Lookup order: exact pair, platform default, table default. Non-image
// media never match a wildcard kind, so text/audio/video stay unpriced
// unless configured explicitly.
class EnergyFactorTable {
public:
    // Ships the single published per-image estimate, 0.0029 kWh, applied
    // to every image kind on every platform.
    static EnergyFactorTable defaults();

    // Throws AuditError on a negative factor or empty provenance.
    void set(const std::string& platform, const std::string& kind, Decimal kwh_per_image,
             const std::string& provenance);

    std::optional<FactorEntry> lookup(const std::string& platform, const std::string& kind,
                                      const std::string& media) const;

    const std::map<std::pair<std::string, std::string>, FactorEntry>& entries() const {
        return entries_;
    }

private:
    std::map<std::pair<std::string, std::string>, FactorEntry> entries_;
};

struct SessionInfo {
    Decimal duration_hours;
    std::int64_t n_students = 0;
    std::string label;
};

// Images that made it into deliverables (slides, shared board), per role.
struct UsageManifest {
    std::map<ActorRole, std::int64_t> used_counts;
};

struct RoleTotals {
    std::int64_t images = 0;
    Decimal kwh;
};

struct MissingFactorNote {
    std::string platform;
    std::string kind;
    std::int64_t images = 0;
};

struct EnergyTotals {
    std::int64_t total_images = 0;
    Decimal total_kwh;
    std::map<ActorRole, RoleTotals> per_role;
    // Factor lines actually used, for the provenance footer in reports.
    std::vector<std::string> provenance;
    // Lenient mode only: pairs that resolved to no factor. Their images
    // count, their energy is zero.
    std::vector<MissingFactorNote> missing_factors;
};

// Sums image_count x factor over the events. Strict mode throws
// AuditError{MissingFactor} on the first unresolvable (platform, kind).
EnergyTotals energy_of(const std::vector<GenerationEvent>& events,
                       const EnergyFactorTable& factors, bool lenient = false);

struct RateWarning {
    ActorRole role;
    std::string message;
};

struct DerivedRates {
    // used / generated per role, clamped to [0, 1] with a warning on clamp.
    std::map<ActorRole, Decimal> conversion_rates;
    std::optional<Decimal> avg_kwh_per_student;
    std::optional<Decimal> kwh_per_student_hour;
    std::vector<RateWarning> warnings;
};

// Conversion rates from the manifest; the per-student figures divide the
// Student role's energy only (teacher preparation happened outside the
// session window and is excluded from per-hour rates).
DerivedRates derived_rates(const EnergyTotals& totals, const SessionInfo& session,
                           const UsageManifest& manifest);

struct LedgerReport {
    EnergyTotals totals;
    DerivedRates rates;
};

}  // namespace footprint
