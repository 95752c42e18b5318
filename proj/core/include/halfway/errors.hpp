#pragma once

#include <stdexcept>

namespace halfway {

/// Raised when an argument lies outside the domain of a density, sampler or
/// configuration. Invalid inputs are rejected, never clamped.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A root search or series could not reach its stopping criterion.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace halfway
