#include "fractal_tube/error.hpp"

namespace fractal_tube {

const char* to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptySystem: return "EmptySystem";
    case ErrorCode::BadRatio: return "BadRatio";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NoRealization: return "NoRealization";
    case ErrorCode::AtPole: return "AtPole";
    case ErrorCode::ContourThroughZero: return "ContourThroughZero";
    case ErrorCode::MultiplicitySuspected: return "MultiplicitySuspected";
    case ErrorCode::NotLattice: return "NotLattice";
    case ErrorCode::LatticeSystem: return "LatticeSystem";
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::NonConvex: return "NonConvex";
    case ErrorCode::DimensionOutOfRange: return "DimensionOutOfRange";
    case ErrorCode::PoleCollision: return "PoleCollision";
    case ErrorCode::MissingDominantPole: return "MissingDominantPole";
    case ErrorCode::ConjugateMismatch: return "ConjugateMismatch";
    case ErrorCode::TilingNotSummable: return "TilingNotSummable";
    case ErrorCode::EpsilonTooSmall: return "EpsilonTooSmall";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

}  // namespace fractal_tube
