#pragma once

#include <stdexcept>
#include <string>

namespace concap {

// Input and precondition failures. The CLI maps these to exit code 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Broken internal invariants (budget overruns, unreachable states).
// The CLI maps these to exit code 2.
struct InvariantPanic : std::logic_error {
    using std::logic_error::logic_error;
};

struct SizeViolation : ValidationError {
    using ValidationError::ValidationError;
};

struct OverlapViolation : ValidationError {
    using ValidationError::ValidationError;
};

struct ShapeViolation : ValidationError {
    using ValidationError::ValidationError;
};

struct SameNode : ValidationError {
    using ValidationError::ValidationError;
};

struct DuplicatePoint : ValidationError {
    using ValidationError::ValidationError;
};

struct InsufficientPackets : ValidationError {
    using ValidationError::ValidationError;
};

struct RegistryOverflow : ValidationError {
    using ValidationError::ValidationError;
};

struct ConfigError : ValidationError {
    using ValidationError::ValidationError;
};

// Unreachable when select_check_triple preconditions hold.
struct NoTriple : InvariantPanic {
    using InvariantPanic::InvariantPanic;
};

struct BudgetViolation : InvariantPanic {
    using InvariantPanic::InvariantPanic;
};

struct NoDispute : InvariantPanic {
    using InvariantPanic::InvariantPanic;
};

struct BackwardTransition : InvariantPanic {
    using InvariantPanic::InvariantPanic;
};

} // namespace concap
