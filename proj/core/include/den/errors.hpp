#pragma once

#include <stdexcept>
#include <string>

namespace den {

/// Base class for all library errors. Validation errors (bad arguments,
/// malformed files) and numerical failures both derive from it so callers
/// can distinguish them from foreign exceptions.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid inputs, shapes, or configuration.
struct ValidationError : Error {
    using Error::Error;
};

/// A numerical procedure failed (singular factorization, no convergence, ...).
struct NumericalError : Error {
    using Error::Error;
};

struct PointOutsideMesh : ValidationError {
    using ValidationError::ValidationError;
};
struct DegenerateTriangle : NumericalError {
    using NumericalError::NumericalError;
};
struct ShapeMismatch : ValidationError {
    using ValidationError::ValidationError;
};
struct InteriorSingular : NumericalError {
    using NumericalError::NumericalError;
};
struct SolverNoConverge : NumericalError {
    using NumericalError::NumericalError;
};
struct ClusterNotSeparable : NumericalError {
    using NumericalError::NumericalError;
};
struct SingularResolvent : NumericalError {
    using NumericalError::NumericalError;
};
struct NotDiagonalizable : NumericalError {
    using NumericalError::NumericalError;
};
struct SolveFailed : NumericalError {
    using NumericalError::NumericalError;
};
struct RankCollapse : NumericalError {
    using NumericalError::NumericalError;
};
struct ReducedPencilSingular : NumericalError {
    using NumericalError::NumericalError;
};
struct CorruptContainer : ValidationError {
    using ValidationError::ValidationError;
};
struct NonFiniteLoss : NumericalError {
    using NumericalError::NumericalError;
};
struct ZeroProjection : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace den
