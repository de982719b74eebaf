#pragma once

#include <stdexcept>
#include <string>

namespace onestreet {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Showdown between equal ranks; unreachable under a zero-diagonal deal.
struct IllegalShowdown : Error {
  using Error::Error;
};

// Object dimensions disagree with the game configuration.
struct ConfigMismatch : Error {
  using Error::Error;
};

// Joint deal construction left no mass off the diagonal.
struct DegenerateDeal : Error {
  using Error::Error;
};

struct InvalidDistribution : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct InvalidStrategy : Error {
  using Error::Error;
};

struct RepresentationError : Error {
  using Error::Error;
};

struct EmptyModel : Error {
  using Error::Error;
};

struct SplitError : Error {
  using Error::Error;
};

struct EvalError : Error {
  using Error::Error;
};

struct NoProbes : Error {
  using Error::Error;
};

}  // namespace onestreet
