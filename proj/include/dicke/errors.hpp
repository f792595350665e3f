#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

/// Invalid or inconsistent run parameters (bad JSON config, out-of-range tolerance, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested matrix would exceed the configured dimension guard.
struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Linear-algebra backend failure; carries the backend's info code.
struct SolverError : std::runtime_error {
    SolverError(const std::string& what, int code)
        : std::runtime_error(what + " (backend code " + std::to_string(code) + ")"),
          backend_code(code) {}
    int backend_code;
};

/// A structurally exact symmetry was violated, which signals a construction bug.
struct SymmetryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Persisted artifact does not match the requested parameters.
struct ProvenanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable or version-incompatible artifact file.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A pipeline stage was invoked before the stage that produces its input.
struct DependencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dicke
