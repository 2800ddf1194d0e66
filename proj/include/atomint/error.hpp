#pragma once

#include <stdexcept>
#include <string>

namespace atomint {

/// Bad input or a violated precondition. Maps to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to reach its tolerance. Maps to exit code 2.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two branches meet at a port on momentum grids that do not coincide.
class MomentumOpenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace atomint
