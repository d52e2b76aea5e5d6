#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgnp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: triple files, CSV rows, program text,
/// config files. Messages name the file/line or record id when known.
class DataError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public DataError {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : DataError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Failures raised while executing a query.
class EngineError : public Error {
 public:
  using Error::Error;
};

class AccessDenied : public EngineError {
 public:
  using EngineError::EngineError;
};

class LinkMissing : public EngineError {
 public:
  using EngineError::EngineError;
};

class UnknownPredicate : public EngineError {
 public:
  using EngineError::EngineError;
};

class DepthExceeded : public EngineError {
 public:
  using EngineError::EngineError;
};

/// Non-numeric operands where a number is required.
class TypeError : public EngineError {
 public:
  using EngineError::EngineError;
};

}  // namespace kgnp
