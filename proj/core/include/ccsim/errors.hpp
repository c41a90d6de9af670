#pragma once

#include <stdexcept>

namespace ccsim {

/// Configuration text failed to parse or validate.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative solver diverged, stagnated, or produced non-finite values.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A time step violated its stability contract.
class StepError : public SolverError {
public:
    using SolverError::SolverError;
};

/// A scheme invariant (positivity, finiteness) broke during integration.
class SchemeError : public SolverError {
public:
    using SolverError::SolverError;
};

/// A certificate check failed; the message lists the failed items.
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ccsim
