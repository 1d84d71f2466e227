#pragma once

#include <stdexcept>
#include <string>

namespace findplan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid generator configuration or malformed config file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input (world files, estimator tables, PDDL).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column = 0)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    std::string out = "line " + std::to_string(line);
    if (column > 0) out += ", column " + std::to_string(column);
    return out + ": " + what;
  }

  int line_;
  int column_;
};

/// Input that parses but violates a data invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Mathematical precondition violated (empty sequence, all-zero marginals, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnreachableError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// No unsearched container is left to search.
class SearchExhaustedError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class GroundingError : public Error {
 public:
  using Error::Error;
};

class UnsupportedRequirementError : public Error {
 public:
  using Error::Error;
};

class ScenarioError : public Error {
 public:
  using Error::Error;
};

class EmissionError : public Error {
 public:
  using Error::Error;
};

/// Broken internal invariant; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace findplan
