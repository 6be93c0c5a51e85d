#pragma once

#include <stdexcept>
#include <string>

namespace julia_rays {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller-supplied data violates a documented precondition.
struct InvalidInputError : Error {
    using Error::Error;
};

// The requested accuracy cannot be met from the available expansion depth.
struct PrecisionUnreachableError : Error {
    using Error::Error;
};

// An angle approximation is too coarse for the requested trace depth
// (doubling multiplies the angle error by 2 per level).
struct InsufficientPrecisionError : Error {
    using Error::Error;
};

// The alpha/beta naming convention is undefined for c on the real ray [1/4, inf).
struct ConventionUndefinedError : Error {
    using Error::Error;
};

// Trail geometry cannot settle a point-location question at the required clearance.
struct InconclusiveGeometryError : Error {
    using Error::Error;
};

// The two trails do not land close enough to form a ray pair.
struct NotARayPairError : Error {
    using Error::Error;
};

// Two supposedly equivalent computations disagreed: a bug trap, not a math outcome.
struct ConsistencyFailureError : Error {
    using Error::Error;
};

// Wake angle is exactly 1/2, so the root is the critical point.
struct RootIsCriticalSignal : Error {
    using Error::Error;
};

}  // namespace julia_rays
