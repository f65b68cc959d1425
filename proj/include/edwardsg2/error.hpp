#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace edwardsg2 {

enum class ErrorCode {
    DivisionByZero,
    NotASquare,
    FieldMismatch,
    NotPrime,
    DegenerateDiscriminant,
    BadParametrization,
    MissingFrakParametrization,
    UnsupportedDegenerateConfiguration,
    LiftFailed,
    NonRationalPreimage,
    SingularQ,
    DegenerateColumn,
    NonRationalLift,
    InconsistentM,
    InvalidParams,
    InvalidPoint,
    ParseError,
};

constexpr std::string_view error_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::NotASquare: return "NotASquare";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::DegenerateDiscriminant: return "DegenerateDiscriminant";
    case ErrorCode::BadParametrization: return "BadParametrization";
    case ErrorCode::MissingFrakParametrization: return "MissingFrakParametrization";
    case ErrorCode::UnsupportedDegenerateConfiguration: return "UnsupportedDegenerateConfiguration";
    case ErrorCode::LiftFailed: return "LiftFailed";
    case ErrorCode::NonRationalPreimage: return "NonRationalPreimage";
    case ErrorCode::SingularQ: return "SingularQ";
    case ErrorCode::DegenerateColumn: return "DegenerateColumn";
    case ErrorCode::NonRationalLift: return "NonRationalLift";
    case ErrorCode::InconsistentM: return "InconsistentM";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// All library failures surface as this exception; code() identifies the
/// condition and name() gives its stable string form (used in CLI JSON).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
};

} // namespace edwardsg2
