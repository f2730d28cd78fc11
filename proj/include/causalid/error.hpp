#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace causalid {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CycleError : public Error {
 public:
  CycleError(std::vector<std::string> witness)
      : Error(describe(witness)), witness_(std::move(witness)) {}

  /// Cycle as a vertex sequence whose first and last entries coincide.
  const std::vector<std::string>& witness() const { return witness_; }

 private:
  static std::string describe(const std::vector<std::string>& cycle) {
    std::string out = "directed cycle: ";
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i) out += " -> ";
      out += cycle[i];
    }
    return out;
  }
  std::vector<std::string> witness_;
};

class DuplicateNode : public Error {
 public:
  using Error::Error;
};
class UnknownEndpoint : public Error {
 public:
  using Error::Error;
};
class SelfLoop : public Error {
 public:
  using Error::Error;
};
class UnknownVariable : public Error {
 public:
  using Error::Error;
};
class OverlappingSets : public Error {
 public:
  using Error::Error;
};
class MalformedProof : public Error {
 public:
  using Error::Error;
};
class InvalidBudget : public Error {
 public:
  using Error::Error;
};
class UnsupportedSetSize : public Error {
 public:
  using Error::Error;
};
class EvaluationError : public Error {
 public:
  using Error::Error;
};
class MissingBinding : public Error {
 public:
  using Error::Error;
};
class IncompatibleFreeVariables : public Error {
 public:
  using Error::Error;
};
class OutOfDomainValue : public Error {
 public:
  using Error::Error;
};
class InvalidModel : public Error {
 public:
  using Error::Error;
};
class InvalidCollection : public Error {
 public:
  using Error::Error;
};
/// A broken internal invariant (a bug, not bad input).
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Syntax or semantic error in a text document, with a 1-based position.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column,
             std::set<std::string> expected = {})
      : Error(format(message, line, column, expected)),
        message_(std::move(message)),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  static std::string format(const std::string& message, std::size_t line,
                            std::size_t column,
                            const std::set<std::string>& expected) {
    std::string out = std::to_string(line) + ":" + std::to_string(column) +
                      ": " + message;
    if (!expected.empty()) {
      out += " (expected one of:";
      for (const auto& e : expected) out += " " + e;
      out += ")";
    }
    return out;
  }
  std::string message_;
  std::size_t line_;
  std::size_t column_;
  std::set<std::string> expected_;
};

}  // namespace causalid
