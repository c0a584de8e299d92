#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input vector shorter than the zero threshold where a nonzero vector is required.
struct ZeroVector : Error {
    using Error::Error;
};

// Chart point outside the admissible domain (body interior, Poincare ball, ...).
struct PointOutsideDomain : Error {
    using Error::Error;
};

// Fundamental tensor failed the positive-definiteness floor.
struct DegenerateTensor : Error {
    using Error::Error;
};

// Flag plane collapsed: u parallel to y, or the flag denominator vanished.
struct DegenerateFlag : Error {
    using Error::Error;
};

// Spanning vectors are linearly dependent below tolerance.
struct DegenerateSpan : Error {
    using Error::Error;
};

// Iterative solver failed to reach its residual target.
struct NoConvergence : Error {
    using Error::Error;
};

// ODE integration exceeded the step budget.
struct StepLimitExceeded : Error {
    using Error::Error;
};

// Independent finite-difference schemes disagree beyond tolerance.
struct NumericalNoise : Error {
    using Error::Error;
};

// Malformed model configuration (names the offending field).
struct InvalidConfig : Error {
    using Error::Error;
};

// Operation not defined for this model kind.
struct UnsupportedModel : Error {
    using Error::Error;
};

// Model does not satisfy the hypotheses of the requested comparison check.
struct InadmissibleModel : Error {
    using Error::Error;
};

// File-system level failure (path included in the message).
struct IoError : Error {
    using Error::Error;
};

}  // namespace finsler
