#ifndef NSMS_ERRORS_HPP
#define NSMS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nsms {

// Mean-zero compatibility of a right-hand side was violated.
struct CompatibilityError : std::runtime_error {
    explicit CompatibilityError(const std::string& what) : std::runtime_error(what) {}
};

// Two phase fields that must carry the same cell count do not.
struct MassMismatchError : std::runtime_error {
    explicit MassMismatchError(const std::string& what) : std::runtime_error(what) {}
};

// The volume-constraint denominator fell below its positive floor.
struct DegeneratePhaseError : std::runtime_error {
    explicit DegeneratePhaseError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solve hit its iteration cap without meeting tolerance.
struct NoConvergenceError : std::runtime_error {
    explicit NoConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Bad or inconsistent run configuration (also raised for unknown keys).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A requested interface width cannot be resolved on the grid.
struct ResolutionError : std::runtime_error {
    explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

// A per-step energy inequality failed beyond tolerance.
struct LedgerViolationError : std::runtime_error {
    explicit LedgerViolationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nsms

#endif
