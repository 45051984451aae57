#pragma once

#include <stdexcept>
#include <string>

namespace spinball {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value violates a documented precondition (non-unit axis, unnormalized spinor, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Two rotations differ by (almost) a half turn, so the nearest lift is not unique.
class AmbiguousRelativeRotation : public Error {
 public:
  using Error::Error;
};

// A single lifted increment reaches the half-turn bound.
class StepTooLarge : public Error {
 public:
  using Error::Error;
};

// Start and end orientations of a supposed loop do not coincide.
class LoopNotClosed : public Error {
 public:
  using Error::Error;
};

// Great-circle motion between antipodal points has no preferred plane.
class AmbiguousGeodesic : public Error {
 public:
  using Error::Error;
};

// Overlap between initial and final state vanishes; its argument is meaningless.
class PhaseUndefined : public Error {
 public:
  using Error::Error;
};

// Malformed input documents (scripts, logs, protocol messages). Maps to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace spinball
