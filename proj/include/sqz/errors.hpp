#pragma once

#include <stdexcept>
#include <string>

namespace sqz {

// Root of every error thrown by the library. Messages are prefixed with the
// name of the operation that failed.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Adaptive step size collapsed below the resolvable limit.
class StiffnessError : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class UnphysicalRates : public Error {
 public:
  using Error::Error;
};

// The squeezing band overlaps transitions other than the selected one.
class MultiTransitionError : public Error {
 public:
  using Error::Error;
};

class InconsistentInputs : public Error {
 public:
  using Error::Error;
};

class NotSqueezed : public Error {
 public:
  using Error::Error;
};

}  // namespace sqz
