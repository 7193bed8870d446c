#include "hdspc/errors.hpp"

namespace hdspc {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::DegenerateVariance: return "DegenerateVariance";
        case ErrorKind::NonpositiveTraceEstimate: return "NonpositiveTraceEstimate";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::AllRowsFlagged: return "AllRowsFlagged";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::InputFormat: return "InputFormat";
    }
    return "Unknown";
}

bool Error::is_input_error() const noexcept {
    switch (kind_) {
        case ErrorKind::NonpositiveTraceEstimate:
        case ErrorKind::NotPositiveDefinite:
        case ErrorKind::AllRowsFlagged:
            return false;
        default:
            return true;
    }
}

void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, std::string(to_string(kind)) + ": " + message);
}

}  // namespace hdspc
