#pragma once

#include <stdexcept>
#include <string>

namespace ucp {

/// Base of every error raised by the engine.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateGeometry : Error { using Error::Error; };
struct CrossingConstraints : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct CrsError : Error { using Error::Error; };
struct HeaderMismatch : Error { using Error::Error; };
struct IndexMissing : Error { using Error::Error; };
struct NoDataUnderObserver : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

// Raised by the pipeline; the message names the stage (and cell when known).
struct StageError : Error { using Error::Error; };

}  // namespace ucp
