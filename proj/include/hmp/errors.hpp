#pragma once

#include <stdexcept>
#include <string>

namespace hmp {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed model text or out-of-tolerance matrix rows.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Operands of incompatible shape, or values outside their domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A belief update was requested on an observation of zero predictive
// probability under the reject policy.
class ZeroProbabilityError : public Error {
 public:
  using Error::Error;
};

// The balance equations of a transition matrix could not be solved.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

// A point, depth, or enumeration cap was exceeded.
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace hmp
