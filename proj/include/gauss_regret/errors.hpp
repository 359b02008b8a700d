#pragma once

#include <stdexcept>
#include <string>

namespace gauss_regret {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidSpec : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// A composition the oracles have no exact route for (e.g. a Minkowski sum of
// two ellipsoids).
struct UnsupportedComposition : Error {
  using Error::Error;
};

// The requested method or route does not cover this spec.
struct Unsupported : Error {
  using Error::Error;
};

struct ConvergenceError : Error {
  using Error::Error;
};

struct NotSequential : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace gauss_regret
