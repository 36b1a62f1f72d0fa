#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace patchwork {

enum class ErrorKind {
    InvalidArgument,
    DegenerateBase,
    SingularInput,
    ChartSingularity,
    BidegreeMismatch,
    NotInvariant,
    NotSorted,
    NonPositive,
    DegenerateLevels,
    NotACurve,
    ResolutionTooCoarse,
    SingularCurve,
    TangencyDetected,
    DuplicateCollision,
    SignInconsistent,
    EulerIdentity,
    SpecViolation,
    NonClosedSurface,
    OrientationUndetermined,
    Schema,
    Io,
    ModeMismatch,
};

constexpr std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateBase: return "DegenerateBase";
    case ErrorKind::SingularInput: return "SingularInput";
    case ErrorKind::ChartSingularity: return "ChartSingularity";
    case ErrorKind::BidegreeMismatch: return "BidegreeMismatch";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::NotSorted: return "NotSorted";
    case ErrorKind::NonPositive: return "NonPositive";
    case ErrorKind::DegenerateLevels: return "DegenerateLevels";
    case ErrorKind::NotACurve: return "NotACurve";
    case ErrorKind::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorKind::SingularCurve: return "SingularCurve";
    case ErrorKind::TangencyDetected: return "TangencyDetected";
    case ErrorKind::DuplicateCollision: return "DuplicateCollision";
    case ErrorKind::SignInconsistent: return "SignInconsistent";
    case ErrorKind::EulerIdentity: return "EulerIdentity";
    case ErrorKind::SpecViolation: return "SpecViolation";
    case ErrorKind::NonClosedSurface: return "NonClosedSurface";
    case ErrorKind::OrientationUndetermined: return "OrientationUndetermined";
    case ErrorKind::Schema: return "Schema";
    case ErrorKind::Io: return "Io";
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    }
    return "Unknown";
}

/// Every failure in the library is reported as an Error carrying a kind,
/// so the CLI can turn it into a machine-readable record.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

} // namespace patchwork
