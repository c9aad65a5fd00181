#pragma once

#include <stdexcept>
#include <string>

namespace flab {

/// Base class for numeric / resolution failures. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A grid, atlas or polygon would exceed its configured size limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Raster cell size is too coarse for the requested geometric test.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A least-squares fit has no usable spread (all abscissae or ordinates equal).
class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

/// Too few complete generations in a tree to form an estimate.
class InsufficientDepthError : public Error {
 public:
  using Error::Error;
};

/// A precondition on the inputs does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace flab
