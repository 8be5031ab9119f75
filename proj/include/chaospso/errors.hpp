#pragma once

#include <stdexcept>
#include <string>

namespace chaospso {

/// Invalid user input: a bad parameter, unknown id or malformed config.
/// The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A failure while computing (non-finite objective, missing data, I/O).
/// The CLI maps this to exit code 2.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chaospso
