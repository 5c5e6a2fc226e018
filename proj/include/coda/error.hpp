#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace coda {

enum class ErrorCode {
    DegenerateInput,
    NegativePart,
    ZeroPartNotAllowed,
    DimensionMismatch,
    DimensionTooSmall,
    InvalidAlpha,
    OutsideSimplex,
    SingularCovariance,
    OracleNonConvergence,
    SpecError,
    ParseError,
    UnknownFixture,
};

const char* to_string(ErrorCode code);

// Single exception type for the library; the code selects the CLI exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<std::size_t> component = std::nullopt)
        : std::runtime_error(message), code_(code), component_(component) {}

    ErrorCode code() const noexcept { return code_; }

    // Offending component (0-based) for per-part violations, when known.
    std::optional<std::size_t> component() const noexcept { return component_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> component_;
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::NegativePart: return "NegativePart";
    case ErrorCode::ZeroPartNotAllowed: return "ZeroPartNotAllowed";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::OutsideSimplex: return "OutsideSimplex";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::OracleNonConvergence: return "OracleNonConvergence";
    case ErrorCode::SpecError: return "SpecError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownFixture: return "UnknownFixture";
    }
    return "Unknown";
}

} // namespace coda
