#pragma once

#include <stdexcept>
#include <string>

namespace tact {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent configuration: shape mismatches, bad hyper-parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data that violates the sample schema.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace tact
