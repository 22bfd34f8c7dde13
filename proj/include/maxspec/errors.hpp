#pragma once

#include <stdexcept>
#include <string>

namespace maxspec {

/// Precondition or input validation failure (dimension mismatch, bad index,
/// malformed parameters). Maps to CLI exit status 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An oracle returned an entry that is negative, not finite, or above its
/// declared norm bound. Maps to CLI exit status 3.
class OracleViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation would exceed a configured resource cap (window size, subset
/// DP size, series growth). Maps to CLI exit status 4.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace maxspec
