#pragma once

#include <stdexcept>
#include <string>

namespace vscbeat {

enum class ErrorKind {
    InvalidParameter,
    DecoupledSystem,
    InvalidInitialConditions,
    InvalidInput,
    StepSizeTooLarge,
    NumericalDivergence,
    TooLargeForDense,
    InsufficientSpan,
    MissingMomenta,
    InvalidIndex,
    Config,
};

const char* to_string(ErrorKind kind) noexcept;

/// True for failures of the numerics themselves rather than of the caller's input.
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool condition, ErrorKind kind, const std::string& what)
{
    if (!condition) fail(kind, what);
}

} // namespace vscbeat
