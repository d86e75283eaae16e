#include "vscbeat/errors.hpp"

namespace vscbeat {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::DecoupledSystem: return "DecoupledSystem";
    case ErrorKind::InvalidInitialConditions: return "InvalidInitialConditions";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::StepSizeTooLarge: return "StepSizeTooLarge";
    case ErrorKind::NumericalDivergence: return "NumericalDivergence";
    case ErrorKind::TooLargeForDense: return "TooLargeForDense";
    case ErrorKind::InsufficientSpan: return "InsufficientSpan";
    case ErrorKind::MissingMomenta: return "MissingMomenta";
    case ErrorKind::InvalidIndex: return "InvalidIndex";
    case ErrorKind::Config: return "Config";
    }
    return "Unknown";
}

bool is_numerical(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::NumericalDivergence:
    case ErrorKind::TooLargeForDense:
    case ErrorKind::InsufficientSpan:
        return true;
    default:
        return false;
    }
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
{
}

void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

} // namespace vscbeat
