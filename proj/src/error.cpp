#include "scq/error.hpp"

namespace scq {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InvalidRegime: return "InvalidRegime";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::SingularNetwork: return "SingularNetwork";
    case ErrorKind::PoleNotBracketed: return "PoleNotBracketed";
    case ErrorKind::NegativeEffectiveImpedance: return "NegativeEffectiveImpedance";
    case ErrorKind::DegenerateModes: return "DegenerateModes";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::DimensionOverflow: return "DimensionOverflow";
    case ErrorKind::LabelingAmbiguous: return "LabelingAmbiguous";
    }
    return "Unknown";
}

ErrorClass classify(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidInput:
        return ErrorClass::Config;
    case ErrorKind::QuadratureNotConverged:
    case ErrorKind::NoConvergence:
    case ErrorKind::NoSignChange:
    case ErrorKind::PoleNotBracketed:
    case ErrorKind::DomainError:
        return ErrorClass::Numerical;
    default:
        return ErrorClass::Model;
    }
}

}  // namespace scq
