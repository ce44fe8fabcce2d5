#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qgs {

/// Failure categories. The CLI maps these onto its exit-code contract.
enum class ErrorKind {
  Parse,
  Schema,
  ConstraintTooLarge,
  Timeout,
  NoSolutions,
  EmptyFormula,
  WidthExceeded,
  TooManyVariables,
  LengthMismatch,
  Domain,
  Index,
  DegenerateTest,
  InvalidArgument,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Text-format error with a 1-based source position. `line == 0` means the
/// position is unknown (e.g. premature end of input).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

/// JSON document does not match the expected schema; `path` is a JSON pointer.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message)
      : Error(ErrorKind::Schema, path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace qgs
