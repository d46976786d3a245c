#pragma once

#include <stdexcept>

namespace stair {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid code parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Too few symbols survive to reconstruct the lost ones.
class UnrecoverableError : public Error {
 public:
  using Error::Error;
};

}  // namespace stair
