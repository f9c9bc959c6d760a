#pragma once

#include <stdexcept>
#include <string>

namespace anarchy {

struct NoPathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownEndHostError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularSystemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& file, int line, const std::string& reason)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + reason),
        file(file), line(line), reason(reason) {}
  std::string file;
  int line;
  std::string reason;
};

struct MissingCoordinatesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace anarchy
