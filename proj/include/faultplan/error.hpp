#pragma once

#include <stdexcept>
#include <string>

namespace faultplan {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problems with the caller's input: malformed documents, violated
/// invariants, out-of-range queries. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Failures while evaluating a well-formed scenario. Exit code 3.
class ComputationError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public InputError {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : InputError(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

class OutOfRange : public InputError {
 public:
  using InputError::InputError;
};

class InconsistentRoute : public InputError {
 public:
  using InputError::InputError;
};

class NoPath : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class NoWorkshopReachable : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class NoDecisions : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class NonDissipating : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class PreconditionViolated : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace faultplan
