#pragma once

#include <stdexcept>
#include <string>

namespace vdc {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Invalid parameter values or combinations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Vector length does not fit the transform or index.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input violates a documented precondition (e.g. unnormalized rows).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace vdc
