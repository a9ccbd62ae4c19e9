#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fstefan {

enum class ErrorCode {
    InvalidInput,
    NonConvergence,
    DegenerateInput,
    DomainError,
    NoSignChange,
    LengthMismatch,
    InvalidState,
    ZeroPivot,
    GridMismatch,
    MaxIterations,
    ParseError,
    ValidationError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::ZeroPivot: return "ZeroPivot";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// that callers (the CLI, table runners) can branch on it without parsing
/// the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace fstefan
