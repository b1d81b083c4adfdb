#pragma once

#include <stdexcept>
#include <string>

namespace sanp {

// Every failure the library reports derives from Error so callers (the CLI in
// particular) can map categories onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf where finite values are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain (e.g. sigma <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

// API misuse: precondition the caller was responsible for.
class ContractError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

// The dataset cannot support the requested operation (too few observed
// pixels, zero elevation spread, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

class InsufficientContextError : public DataError {
 public:
  using DataError::DataError;
};

// A checkpoint does not match the requested model configuration.
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

// A run exceeds its configured memory budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t iteration)
      : Error(what), iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

}  // namespace sanp
