#pragma once

#include <stdexcept>

namespace emap {

/// Base class for every error raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Degenerate projection geometry (collapsed denominator, invalid camera).
struct GeometryError : Error {
  using Error::Error;
};

/// Numerical failure inside the filter (non-finite state, singular innovation).
struct FilterError : Error {
  using Error::Error;
};

/// Translation-aware prediction requested without a usable target depth.
struct MissingDepthError : Error {
  using Error::Error;
};

/// Malformed input file; the message carries the file and line.
struct ParseError : Error {
  using Error::Error;
};

/// Filesystem or container-format failure.
struct IoError : Error {
  using Error::Error;
};

}  // namespace emap
