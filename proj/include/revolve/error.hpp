#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace revolve {

/// Step and slot counts. Signed so that "no slot yet" can be -1.
using step_t = std::int64_t;

/// Invalid construction arguments (zero step counts, missing sizes, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exact integer arithmetic would not fit in 64 bits.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Calls made in the wrong order or against the wrong mode.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Non-finite values appeared in a field or objective.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arena could not be allocated.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline step_t checked_mul(step_t a, step_t b, const char* what) {
  step_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError(std::string(what) + ": 64-bit overflow");
  }
  return out;
}

inline step_t checked_add(step_t a, step_t b, const char* what) {
  step_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError(std::string(what) + ": 64-bit overflow");
  }
  return out;
}

}  // namespace detail
}  // namespace revolve
