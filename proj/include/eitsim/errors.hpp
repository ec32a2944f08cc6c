#pragma once

#include <stdexcept>
#include <string>

namespace eitsim {

// Base class for everything thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid physical parameters or malformed configuration input.
struct ValidationError : Error {
    using Error::Error;
};

// A formula or linear system hit an exactly singular configuration.
struct SingularConfiguration : Error {
    using Error::Error;
};

// Steady state is not unique; message names the null direction.
struct DegenerateSteadyState : Error {
    using Error::Error;
};

// Requested quantity lies outside the validity domain of the formula.
struct DomainError : Error {
    using Error::Error;
};

// Adaptive integrator could not proceed; message carries the last good time.
struct IntegrationFailure : Error {
    using Error::Error;
};

// Spectrum lacks the feature an extraction step needs (e.g. no EIT dip).
struct NoResonance : Error {
    using Error::Error;
};

// Detuning grid too coarse for the requested derivative or fit.
struct ResolutionError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace eitsim
