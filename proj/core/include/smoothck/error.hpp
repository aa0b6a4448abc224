#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace smoothck {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed model or property text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        detail_(message),
        line_(line),
        column_(column) {}

  const std::string& detail() const noexcept { return detail_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  std::string detail_;
  int line_;
  int column_;
};

/// A structure violated one or more of its invariants. Every violation is reported.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "invalid model:";
    for (const auto& item : items) out += "\n  - " + item;
    return out;
  }

  std::vector<std::string> violations_;
};

/// Arithmetic failure while evaluating an expression (division by zero, invalid rate).
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Stochastic simulation could not proceed.
class SimulationError : public Error {
 public:
  using Error::Error;
};

/// A trajectory cannot decide a formula (horizon too short, missing mean signal, unbound names).
class MonitorError : public Error {
 public:
  using Error::Error;
};

/// GP inference failure: invalid training data, factorization failure, or a failed search.
class InferenceError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing files failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace smoothck
