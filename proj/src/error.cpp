#include "orthospline/error.hpp"

namespace orthospline {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MultiplicityExceeded: return "MultiplicityExceeded";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::BadBoundary: return "BadBoundary";
        case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::PartitionMismatch: return "PartitionMismatch";
        case ErrorCode::QuadratureTooCoarse: return "QuadratureTooCoarse";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::InverseNotAvailable: return "InverseNotAvailable";
        case ErrorCode::DegenerateFit: return "DegenerateFit";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::EmptyInterval: return "EmptyInterval";
        case ErrorCode::NotAKnot: return "NotAKnot";
    }
    return "Unknown";
}

}  // namespace orthospline
