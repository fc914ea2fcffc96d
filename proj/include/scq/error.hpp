#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scq {

enum class ErrorKind {
    InvalidInput,
    InvalidRegime,
    QuadratureNotConverged,
    DomainError,
    NotHermitian,
    NoConvergence,
    NoSignChange,
    SingularNetwork,
    PoleNotBracketed,
    NegativeEffectiveImpedance,
    DegenerateModes,
    TruncationTooSmall,
    DimensionOverflow,
    LabelingAmbiguous,
};

std::string_view to_string(ErrorKind kind);

// Coarse classification used for CLI exit codes.
enum class ErrorClass { Config = 1, Numerical = 2, Model = 3 };

ErrorClass classify(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace scq
