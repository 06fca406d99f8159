#pragma once

#include <stdexcept>
#include <string>

namespace gnpr {

/// Input violates a documented precondition (bad shape, out-of-range value,
/// malformed spec). The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written. The CLI maps this to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gnpr
