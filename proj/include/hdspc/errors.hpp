#pragma once

#include <stdexcept>
#include <string>

namespace hdspc {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    DegenerateVariance,
    NonpositiveTraceEstimate,
    NotPositiveDefinite,
    AllRowsFlagged,
    TooLarge,
    InputFormat,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library. The kind lets
/// callers (the CLI in particular) map failures onto exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// True for failures caused by the data handed in, false for
    /// numeric breakdowns inside an otherwise valid computation.
    bool is_input_error() const noexcept;

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace hdspc
