#pragma once

#include <stdexcept>
#include <string>

namespace fractal_tube {

enum class ErrorCode {
    InvalidArgument,
    EmptySystem,
    BadRatio,
    DimMismatch,
    NoConvergence,
    BudgetExceeded,
    NoRealization,
    AtPole,
    ContourThroughZero,
    MultiplicitySuspected,
    NotLattice,
    LatticeSystem,
    NonPositiveLength,
    DegenerateTriangle,
    NonConvex,
    DimensionOutOfRange,
    PoleCollision,
    MissingDominantPole,
    ConjugateMismatch,
    TilingNotSummable,
    EpsilonTooSmall,
    ParseError,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace fractal_tube
