#pragma once

#include <stdexcept>
#include <string>

namespace mmgsep {

// Bad argument or malformed input (CLI exit code 2).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input too short for the requested window, segment or filter warm-up.
class SizingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Raised by envelope construction when a sequence has fewer than two maxima
// or two minima; callers treat the sequence as a residual.
class MonotoneComponentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical invariant (reconstruction, stability) failed (CLI exit code 3).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mmgsep
