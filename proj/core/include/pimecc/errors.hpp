#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pimecc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operations touched the same partition in one cycle, or an operation
/// spans a partition boundary whose switch is disabled.
class ScheduleConflict : public Error {
 public:
  using Error::Error;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

/// The array geometry cannot hold the requested layout.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class CodeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NetlistError : public Error {
 public:
  NetlistError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  /// 1-based source line, 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace pimecc
