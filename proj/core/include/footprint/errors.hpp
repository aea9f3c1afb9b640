#pragma once

#include <stdexcept>
#include <string>

namespace footprint {

// Hard errors abort a strict run (CLI exit code 3). Lenient runs downgrade
// most of them to warnings at the call site that can do so.
class AuditError : public std::runtime_error {
public:
    enum class Kind {
        MissingRequiredColumn,
        MalformedRow,
        EncodingError,
        SchemaMismatch,
        MalformedRecord,
        MissingFactor,
        DivisionContext,
        NoTimestamps,
        NoFactorsConfigured,
        NoApplicableBaseline,
        BaselineNameCollision,
        ConfigError,
        IoError,
    };

    AuditError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

}  // namespace footprint
