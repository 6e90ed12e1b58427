#include "nctheta/error.hpp"

namespace nctheta {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::SingularIntegerMatrix: return "SingularIntegerMatrix";
        case ErrorCode::NonPositiveDeformation: return "NonPositiveDeformation";
        case ErrorCode::EmbeddingConditionViolated: return "EmbeddingConditionViolated";
        case ErrorCode::KindMismatch: return "KindMismatch";
        case ErrorCode::GridIncompatibleShift: return "GridIncompatibleShift";
        case ErrorCode::DegenerateTestVector: return "DegenerateTestVector";
        case ErrorCode::ConsistencyViolated: return "ConsistencyViolated";
        case ErrorCode::NotPositive: return "NotPositive";
        case ErrorCode::DegenerateTau: return "DegenerateTau";
        case ErrorCode::DivergentSeries: return "DivergentSeries";
        case ErrorCode::DivergentIntegral: return "DivergentIntegral";
        case ErrorCode::InternalIdentityViolated: return "InternalIdentityViolated";
        case ErrorCode::UnsupportedVector: return "UnsupportedVector";
        case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
        case ErrorCode::ConfigSyntax: return "ConfigSyntax";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace nctheta
