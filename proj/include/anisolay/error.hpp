#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace anisolay {

/// Input data that cannot be laid out: malformed files, invalid graphs,
/// disconnected components.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed graph or layout text. `line()` is 1-based, 0 when unknown.
class ParseError : public DataError {
 public:
  ParseError(const std::string& message, std::size_t line)
      : DataError(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Optimization or linear algebra failed: divergent steps, singular systems.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace anisolay
