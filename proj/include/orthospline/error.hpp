#pragma once

#include <stdexcept>
#include <string>

namespace orthospline {

enum class ErrorCode {
    MultiplicityExceeded,
    OutOfRange,
    BadBoundary,
    LevelOutOfRange,
    DomainError,
    PartitionMismatch,
    QuadratureTooCoarse,
    NotPositiveDefinite,
    InverseNotAvailable,
    DegenerateFit,
    IndexOutOfRange,
    EmptyInterval,
    NotAKnot,
};

const char* to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace orthospline
