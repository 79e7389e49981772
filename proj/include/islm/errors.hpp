#pragma once

#include <stdexcept>
#include <string>

namespace islm {

// Base class for all engine failures that map to CLI exit code 2.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoKaldorInterval : Error {
    using Error::Error;
};

struct NoEquilibrium : Error {
    using Error::Error;
};

struct SeedNotFound : Error {
    using Error::Error;
};

struct FoldCountMismatch : Error {
    using Error::Error;
};

struct AmbiguousSign : Error {
    using Error::Error;
};

struct StepFloorReached : Error {
    using Error::Error;
};

struct DomainExit : Error {
    using Error::Error;
};

struct NoCycle : Error {
    using Error::Error;
};

struct NonConvergent : Error {
    using Error::Error;
};

struct NoReturnDrift : Error {
    using Error::Error;
};

struct ConditionBroken : Error {
    using Error::Error;
};

struct NoHysteresis : Error {
    using Error::Error;
};

struct EmptyGeometry : Error {
    using Error::Error;
};

} // namespace islm
