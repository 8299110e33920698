#pragma once

#include <stdexcept>
#include <string>

namespace vdflow {

// Error hierarchy mirrors the CLI exit codes: config/input problems (exit 2),
// linear solver failures (exit 3), violated scheme properties (exit 4).

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : InputError {
    using InputError::InputError;
};

struct MeshParseError : InputError {
    using InputError::InputError;
};

struct MeshIntegrityError : InputError {
    using InputError::InputError;
};

struct ResourceError : InputError {
    using InputError::InputError;
};

struct UnsupportedDegreeError : InputError {
    using InputError::InputError;
};

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
    SolverError(const std::string& msg, int step = -1)
        : std::runtime_error(msg), step_index(step) {}
    int step_index;
};

struct SingularMatrixError : SolverError {
    SingularMatrixError(const std::string& msg, int pivot)
        : SolverError(msg), pivot_index(pivot) {}
    int pivot_index;
};

struct DegenerateDensityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown in strict mode when a quantity the scheme guarantees (gamma > 0,
// nonnegative density, conserved mass, energy identity) fails numerically.
struct PropertyViolation : std::runtime_error {
    PropertyViolation(const std::string& msg, int step = -1)
        : std::runtime_error(msg), step_index(step) {}
    int step_index;
};

} // namespace vdflow
