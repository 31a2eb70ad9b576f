#pragma once

#include <stdexcept>
#include <string>

namespace convexopt {

/// Base class for all library errors. Subclasses map to CLI exit codes:
/// validation errors (bad inputs, violated preconditions) exit with 2,
/// numerical failures exit with 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct NumericalError : Error {
    using Error::Error;
};

struct InvalidBody : ValidationError {
    using ValidationError::ValidationError;
};

struct OriginOutside : ValidationError {
    using ValidationError::ValidationError;
};

struct MeshTooCoarse : ValidationError {
    using ValidationError::ValidationError;
};

struct SolveFailed : NumericalError {
    using NumericalError::NumericalError;
};

struct VolumeOutOfRange : ValidationError {
    using ValidationError::ValidationError;
};

struct RieszQuadratureBudgetExceeded : ValidationError {
    using ValidationError::ValidationError;
};

struct SamplerStalled : NumericalError {
    using NumericalError::NumericalError;
};

struct DegenerateChart : ValidationError {
    using ValidationError::ValidationError;
};

struct InfeasibleInit : ValidationError {
    using ValidationError::ValidationError;
};

struct EvaluationFailure : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace convexopt
