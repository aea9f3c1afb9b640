#include "footprint/ledger.hpp"

#include <algorithm>

#include "footprint/errors.hpp"

namespace footprint {

namespace {
constexpr const char* kDefaultProvenance =
    "0.0029 kWh/image per Luccioni et al. 2024 (2.907 kWh per 1000 images)";
}

EnergyFactorTable EnergyFactorTable::defaults() {
    EnergyFactorTable t;
    const Decimal factor = Decimal::parse("0.0029");
    for (GenerationKind k :
         {GenerationKind::GridGeneration, GenerationKind::SingleSelection,
          GenerationKind::Variation, GenerationKind::DalleMention, GenerationKind::Precounted}) {
        t.set("*", std::string(kind_name(k)), factor, kDefaultProvenance);
    }
    return t;
}

void EnergyFactorTable::set(const std::string& platform, const std::string& kind,
                            Decimal kwh_per_image, const std::string& provenance) {
    if (kwh_per_image.is_negative())
        throw AuditError(AuditError::Kind::ConfigError,
                         "energy factor for (" + platform + ", " + kind + ") is negative");
    if (provenance.empty())
        throw AuditError(AuditError::Kind::ConfigError,
                         "energy factor for (" + platform + ", " + kind +
                             ") lacks a provenance citation");
    entries_[{platform, kind}] = FactorEntry{kwh_per_image, provenance};
}

std::optional<FactorEntry> EnergyFactorTable::lookup(const std::string& platform,
                                                     const std::string& kind,
                                                     const std::string& media) const {
    auto find = [&](const std::string& p, const std::string& k) -> std::optional<FactorEntry> {
        // Wildcard kinds only price images; other media need explicit rows.
        if (k == "*" && media != "image") return std::nullopt;
        auto it = entries_.find({p, k});
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    };
    std::string lookup_kind = media == "image" ? kind : media;
    for (const auto& [p, k] : {std::pair{platform, lookup_kind},
                               {platform, std::string("*")},
                               {std::string("*"), lookup_kind},
                               {std::string("*"), std::string("*")}}) {
        if (auto hit = find(p, k)) return hit;
    }
    return std::nullopt;
}

EnergyTotals energy_of(const std::vector<GenerationEvent>& events,
                       const EnergyFactorTable& factors, bool lenient) {
    EnergyTotals totals;
    std::map<std::pair<std::string, std::string>, std::int64_t> unresolved;
    std::vector<std::string> provenance_seen;

    for (const GenerationEvent& ev : events) {
        RoleTotals& role = totals.per_role[ev.role];
        totals.total_images += ev.image_count;
        role.images += ev.image_count;
        if (ev.image_count == 0) continue;  // Failed events cost nothing

        std::string kind(kind_name(ev.kind));
        auto factor = factors.lookup(ev.platform_label, kind, ev.media);
        if (!factor) {
            std::string lookup_kind = ev.media == "image" ? kind : ev.media;
            if (!lenient)
                throw AuditError(AuditError::Kind::MissingFactor,
                                 "no energy factor for (" + ev.platform_label + ", " +
                                     lookup_kind + ")");
            unresolved[{ev.platform_label, lookup_kind}] += ev.image_count;
            continue;
        }
        Decimal kwh = factor->kwh_per_image.times(ev.image_count);
        totals.total_kwh += kwh;
        role.kwh += kwh;
        if (std::find(provenance_seen.begin(), provenance_seen.end(), factor->provenance) ==
            provenance_seen.end())
            provenance_seen.push_back(factor->provenance);
    }

    totals.provenance = std::move(provenance_seen);
    for (const auto& [key, images] : unresolved)
        totals.missing_factors.push_back({key.first, key.second, images});
    return totals;
}

DerivedRates derived_rates(const EnergyTotals& totals, const SessionInfo& session,
                           const UsageManifest& manifest) {
    DerivedRates rates;

    for (const auto& [role, used] : manifest.used_counts) {
        auto it = totals.per_role.find(role);
        std::int64_t generated = it == totals.per_role.end() ? 0 : it->second.images;
        if (generated == 0) {
            throw AuditError(AuditError::Kind::DivisionContext,
                             "conversion rate requested for role '" + std::string(role_name(role)) +
                                 "' with zero generated images");
        }
        Decimal rate = Decimal::from_int(used).div(Decimal::from_int(generated));
        if (used > generated) {
            rates.warnings.push_back(
                {role, "manifest lists " + std::to_string(used) + " used images but only " +
                           std::to_string(generated) + " were generated; rate clamped to 1"});
            rate = Decimal::from_int(1);
        }
        rates.conversion_rates[role] = rate;
    }

    if (session.n_students >= 1) {
        auto it = totals.per_role.find(ActorRole::Student);
        Decimal student_kwh = it == totals.per_role.end() ? Decimal{} : it->second.kwh;
        Decimal avg = student_kwh.div(Decimal::from_int(session.n_students));
        rates.avg_kwh_per_student = avg;
        if (!session.duration_hours.is_zero())
            rates.kwh_per_student_hour = avg.div(session.duration_hours);
    } else {
        throw AuditError(AuditError::Kind::DivisionContext,
                         "per-student rates need at least one student in the session");
    }
    return rates;
}

}  // namespace footprint
