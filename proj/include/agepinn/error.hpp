#pragma once

#include <stdexcept>
#include <string>

namespace agepinn {

// Base for every error the library reports. The CLI maps the subclasses to
// exit codes: usage 2, numeric 3, I/O 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments, shapes or configuration values.
class UsageError : public Error {
 public:
  using Error::Error;
};

// CFL violations, non-finite values, division by zero.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Unreadable or malformed files.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace agepinn
