#pragma once

#include <stdexcept>
#include <string>

namespace qmoney {

/// Operand shapes disagree (vector length, ambient dimension, register width).
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A desk-scale size guard was hit (qubit cap, census cap, degree cap).
struct CapExceeded : std::length_error {
  using std::length_error::length_error;
};

/// An internal consistency check failed. Signals a bug or a violated
/// mathematical precondition, never bad user input.
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// A numerical procedure could not produce a trustworthy answer
/// (singular system, unresolved degeneracy, non-terminating retry loop).
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qmoney
