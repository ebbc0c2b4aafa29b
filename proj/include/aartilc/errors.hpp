// Error types thrown by the docking-simulation library.
#pragma once

#include <stdexcept>
#include <string>

namespace aartilc {

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Terminal-time detection ran off the end of a trajectory with Dx still > 0.
struct NoContact : SimError {
    using SimError::SimError;
};

// An integrator state left the sane range (|value| > 1e6).
struct NumericalDivergence : SimError {
    using SimError::SimError;
};

// An iterative solver hit its iteration cap before meeting tolerance.
struct NoConvergence : SimError {
    using SimError::SimError;
};

// A matrix required to be symmetric was not, beyond tolerance.
struct NotSymmetric : SimError {
    using SimError::SimError;
};

struct SingularMatrix : SimError {
    using SimError::SimError;
};

// A random disturbance draw exceeded its declared bound.
struct NoiseBoundViolation : SimError {
    using SimError::SimError;
};

// A measured quantity exceeded a bound the scenario declared for it
// (signals a miscalibrated scenario, not a numerical failure).
struct BoundViolation : SimError {
    using SimError::SimError;
};

struct InsufficientSamples : SimError {
    using SimError::SimError;
};

// Scenario/config validation failure; the message names the offending key.
struct ConfigError : SimError {
    using SimError::SimError;
};

}  // namespace aartilc
