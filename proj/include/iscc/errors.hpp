#pragma once

#include <stdexcept>
#include <string>

namespace iscc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

// Operating point violates a hard physical limit (duty cycle, rate, ...).
struct InfeasibleError : Error {
  using Error::Error;
};

// Query outside the domain of a tabulated or bounded function.
struct DomainError : Error {
  using Error::Error;
};

// Static and action ΔP distributions do not separate (min action mean <= 0).
struct NoCrossingError : Error {
  using Error::Error;
};

struct FitError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

}  // namespace iscc
