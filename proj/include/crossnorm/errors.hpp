#pragma once

#include <stdexcept>
#include <string>

namespace crossnorm {

/// Base of every error raised by the library. The CLI maps subclasses to
/// exit codes: numerical and internal failures exit with 2, everything else
/// with 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Which density-operator property failed validation.
enum class StateProperty { Hermiticity, Positivity, Trace, Finiteness, Shape, Normalization };

const char* to_string(StateProperty p);

class InvalidStateError : public Error {
 public:
  InvalidStateError(StateProperty property, const std::string& detail)
      : Error(std::string("invalid state (") + to_string(property) + "): " + detail),
        property_(property) {}

  StateProperty property() const noexcept { return property_; }

 private:
  StateProperty property_;
};

class InvalidChannelError : public Error {
 public:
  using Error::Error;
};

/// A file that does not match its JSON schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Post-selection on a branch whose probability vanishes.
class DegenerateBranchError : public Error {
 public:
  using Error::Error;
};

/// A broken library invariant, e.g. an inverted bracket.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace crossnorm
