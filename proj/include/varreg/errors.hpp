#ifndef VARREG_ERRORS_HPP
#define VARREG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace varreg {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Index-function domain and smoothness violations.
struct DomainExceeded : Error { using Error::Error; };
struct NotDifferentiable : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };

// Calculus construction failures (sampled checks).
struct NotConvex : Error { using Error::Error; };
struct NotConcave : Error { using Error::Error; };
struct DegenerateDerivative : Error { using Error::Error; };
struct NotIndexFunction : Error { using Error::Error; };

// Problem / solver failures.
struct GradientMismatch : Error { using Error::Error; };
struct SamplingFailed : Error { using Error::Error; };
struct NonFiniteValue : Error { using Error::Error; };
struct NotSupported : Error { using Error::Error; };
struct RuleViolation : Error { using Error::Error; };

// Source-analysis failures.
struct BracketFailure : Error { using Error::Error; };
struct SourceConditionFails : Error { using Error::Error; };

// Harness failures.
struct InsufficientData : Error { using Error::Error; };
struct ContractViolation : Error { using Error::Error; };

} // namespace varreg

#endif // VARREG_ERRORS_HPP
