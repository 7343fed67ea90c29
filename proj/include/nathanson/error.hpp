#ifndef NATHANSON_ERROR_HPP
#define NATHANSON_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace nathanson
{

enum class ErrorCode
{
    ParseError,
    DecimalTooLarge,
    StrictViolation,
    ModeMismatch,
    InvalidConfig,
    NotOutsideW0,
    ZeroNotInA,
    RuleBMembershipViolation,
    TooFewTerms,
    BelowGuarantee,
    NoMergeSlot,
    NotStrict,
    WrongMode,
    UnsupportedVersion,
    SchemaError,
    WindowTooLarge,
    ElementNotInA,
    ParameterMismatch,
};

inline constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch(code)
    {
        case ErrorCode::ParseError:               return "ParseError";
        case ErrorCode::DecimalTooLarge:          return "DecimalTooLarge";
        case ErrorCode::StrictViolation:          return "StrictViolation";
        case ErrorCode::ModeMismatch:             return "ModeMismatch";
        case ErrorCode::InvalidConfig:            return "InvalidConfig";
        case ErrorCode::NotOutsideW0:             return "NotOutsideW0";
        case ErrorCode::ZeroNotInA:               return "ZeroNotInA";
        case ErrorCode::RuleBMembershipViolation: return "RuleBMembershipViolation";
        case ErrorCode::TooFewTerms:              return "TooFewTerms";
        case ErrorCode::BelowGuarantee:           return "BelowGuarantee";
        case ErrorCode::NoMergeSlot:              return "NoMergeSlot";
        case ErrorCode::NotStrict:                return "NotStrict";
        case ErrorCode::WrongMode:                return "WrongMode";
        case ErrorCode::UnsupportedVersion:       return "UnsupportedVersion";
        case ErrorCode::SchemaError:              return "SchemaError";
        case ErrorCode::WindowTooLarge:           return "WindowTooLarge";
        case ErrorCode::ElementNotInA:            return "ElementNotInA";
        case ErrorCode::ParameterMismatch:        return "ParameterMismatch";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code)
    {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

} // namespace nathanson
#endif // NATHANSON_ERROR_HPP
