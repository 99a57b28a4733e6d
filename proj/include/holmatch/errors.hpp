#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace holmatch {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input in the exchange format or in a canonical term string.
struct ParseError : Error {
  ParseError(const std::string& msg, size_t line = 0, size_t col = 0)
      : Error(line ? msg + " (line " + std::to_string(line) + ", col " +
                         std::to_string(col) + ")"
                   : msg),
        line(line),
        col(col) {}
  size_t line;
  size_t col;
};

// A de Bruijn index escapes every enclosing binder where closedness is required.
struct UnboundVariableError : Error {
  using Error::Error;
};

// A theorem mentions a constant with no declared signature.
struct UnknownConstantError : Error {
  using Error::Error;
};

// A relative-pattern id that the queried index has never seen.
struct UnknownPatternError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace holmatch
