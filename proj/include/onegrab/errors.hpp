#pragma once

#include <stdexcept>
#include <string>

namespace onegrab {

// Base class for every error raised by the library. The CLI maps these onto
// process exit codes and the python module re-raises them under the same names.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Population arithmetic does not add up (sum of structure sizes exceeds N,
// a structure is empty, or N is zero).
class SizeViolation : public Error {
  using Error::Error;
};

// No structures were given.
class EmptyStructures : public Error {
  using Error::Error;
};

// An argument is outside the mathematical domain of the operation.
class DomainError : public Error {
  using Error::Error;
};

// A guarded enumeration would exceed its size limit.
class TooLarge : public Error {
  using Error::Error;
};

// The delta bound's denominator N - r - theta + 1 is not positive; callers
// fall back to the exact single-structure tail.
class DenominatorViolation : public Error {
  using Error::Error;
};

// The requirement cannot be met by any grab size (e.g. eps > theta_i).
class Infeasible : public Error {
  using Error::Error;
};

// A minimal point set does not determine a model (coincident or collinear).
class Degenerate : public Error {
  using Error::Error;
};

// Rejection sampling could not produce well-separated scene models.
class SeparationFailure : public Error {
  using Error::Error;
};

}  // namespace onegrab
