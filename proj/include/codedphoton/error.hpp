#pragma once

#include <stdexcept>
#include <string>

namespace codedphoton {

/// Raised when an operation's inputs violate its contract (bad grid, wrong
/// code parity, unnormalized mode, ...). The message is a single line
/// suitable for direct display.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace codedphoton
