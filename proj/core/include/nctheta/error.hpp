#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace nctheta {

enum class ErrorCode {
    SingularIntegerMatrix,
    NonPositiveDeformation,
    EmbeddingConditionViolated,
    KindMismatch,
    GridIncompatibleShift,
    DegenerateTestVector,
    ConsistencyViolated,
    NotPositive,
    DegenerateTau,
    DivergentSeries,
    DivergentIntegral,
    InternalIdentityViolated,
    UnsupportedVector,
    TruncationTooSmall,
    ConfigSyntax,
    ConfigInvalid,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by build_embedding when a column of Φ breaks the lattice embedding condition.
class EmbeddingConditionError : public Error {
public:
    EmbeddingConditionError(int column, double sum)
        : Error(ErrorCode::EmbeddingConditionViolated,
                "column " + std::to_string(column) + " has x1j*x4j + x2j*x5j + x3j*x6j = " +
                    std::to_string(sum)),
          column_(column) {}

    /// 1-based column index of Φ.
    int column() const noexcept { return column_; }

private:
    int column_;
};

/// Configuration errors (ConfigSyntax / ConfigInvalid) with the JSON pointer of the offending field.
class ConfigError : public Error {
public:
    ConfigError(ErrorCode code, std::string pointer, const std::string& what)
        : Error(code, (pointer.empty() ? std::string() : pointer + ": ") + what), pointer_(std::move(pointer)) {}

    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

}  // namespace nctheta
