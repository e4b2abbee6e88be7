#pragma once

#include <stdexcept>
#include <string>

namespace pcdiff {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unknown block id, or a block not present in the queried view.
struct LookupError : Error {
  using Error::Error;
};

// Argument outside a function's mathematical domain.
struct DomainError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct LogFormatError : Error {
  using Error::Error;
};

}  // namespace pcdiff
